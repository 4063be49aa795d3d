#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "routeseal/canon.hpp"
#include "routeseal/lexer.hpp"

namespace routeseal::minilang {

enum class Type { Int, Str, Bool, Unit };

std::string_view type_name(Type t);
std::optional<Type> type_from_name(std::string_view name);

// Unit is the monostate alternative.
using Value = std::variant<std::monostate, std::int64_t, std::string, bool>;

Type value_type(const Value& v);
std::string value_to_string(const Value& v);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
    enum class Kind { IntLit, StrLit, BoolLit, Var, Unary, Binary, Call, ForwardCall };

    Kind kind;
    Span span;

    std::int64_t int_val = 0;
    std::string str_val;
    bool bool_val = false;

    std::string name;         // Var name, Call function name, Unary/Binary operator
    std::string target_file;  // Call only: explicit file qualifier, empty for same-file
    std::vector<ExprPtr> args;  // Call/ForwardCall arguments, Unary operand, Binary lhs+rhs
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
    enum class Kind { Let, Assign, If, While, Return, ExprStmt };

    Kind kind;
    Span span;
    std::string name;  // Let/Assign target
    ExprPtr expr;      // value, condition, or return expression (may be null)
    std::vector<StmtPtr> body;
    std::vector<StmtPtr> else_body;
};

struct Param {
    std::string name;
    Type type = Type::Int;
};

struct FunctionDef {
    std::string file_id;
    std::string name;
    std::vector<Param> params;
    Type return_type = Type::Unit;
    std::vector<StmtPtr> body;
};

// Per-argument record kept for call-site rewriting. Literal arguments can be
// baked into a call descriptor; everything else is forwarded at runtime.
struct ArgInfo {
    Span span;
    bool is_literal = false;
    Type literal_type = Type::Int;
    std::string literal_text;  // descriptor rendering: digits, raw string value, true/false
};

struct CallSite {
    std::string caller_file;
    std::string caller_fn;
    std::string callee_file;
    std::string callee_name;
    std::size_t arity = 0;
    Span span;  // whole call expression in the caller's source text
    std::vector<ArgInfo> args;

    bool cross_file() const { return caller_file != callee_file; }
    std::string target() const { return callee_file + "." + callee_name; }
};

struct ParsedFile {
    std::string file_id;
    std::vector<FunctionDef> functions;
};

// Immutable after parse; function definitions keep stable addresses, so the
// registry and dispatch cache may hold pointers into it.
struct Program {
    std::vector<canon::SourceFile> files;
    std::vector<ParsedFile> units;  // parallel to files
    std::string entry_file;
    std::string entry_fn;
    std::vector<CallSite> call_sites;  // deterministic (file, span) order

    const canon::SourceFile* source(std::string_view file_id) const;
    const FunctionDef* find_function(std::string_view file_id, std::string_view name,
                                     std::size_t arity) const;
};

// Builtin names; user functions may not shadow them.
inline constexpr std::string_view kForwardCallName = "forward_call";
inline constexpr std::string_view kPrintName = "print";

}  // namespace routeseal::minilang

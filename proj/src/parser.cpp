#include "routeseal/parser.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "routeseal/errors.hpp"

namespace routeseal::minilang {

std::string_view type_name(Type t) {
    switch (t) {
        case Type::Int: return "Int";
        case Type::Str: return "Str";
        case Type::Bool: return "Bool";
        case Type::Unit: return "Unit";
    }
    return "Unit";
}

std::optional<Type> type_from_name(std::string_view name) {
    if (name == "Int") return Type::Int;
    if (name == "Str") return Type::Str;
    if (name == "Bool") return Type::Bool;
    if (name == "Unit") return Type::Unit;
    return std::nullopt;
}

Type value_type(const Value& v) {
    switch (v.index()) {
        case 1: return Type::Int;
        case 2: return Type::Str;
        case 3: return Type::Bool;
        default: return Type::Unit;
    }
}

std::string value_to_string(const Value& v) {
    switch (v.index()) {
        case 1: return std::to_string(std::get<std::int64_t>(v));
        case 2: return std::get<std::string>(v);
        case 3: return std::get<bool>(v) ? "true" : "false";
        default: return "()";
    }
}

const canon::SourceFile* Program::source(std::string_view file_id) const {
    for (const auto& f : files)
        if (f.file_id == file_id) return &f;
    return nullptr;
}

const FunctionDef* Program::find_function(std::string_view file_id, std::string_view name,
                                          std::size_t arity) const {
    for (const auto& unit : units) {
        if (unit.file_id != file_id) continue;
        for (const auto& fn : unit.functions) {
            if (fn.name == name && fn.params.size() == arity) return &fn;
        }
    }
    return nullptr;
}

namespace {

const std::set<std::string_view> kKeywords = {"fn",     "let",  "if",   "else",
                                              "while",  "return", "true", "false"};

class FileParser {
public:
    FileParser(const canon::SourceFile& file)
        : file_id_(file.file_id), tokens_(lex(file.text, file.file_id)) {}

    ParsedFile parse_file() {
        ParsedFile unit;
        unit.file_id = file_id_;
        while (!at_eof()) {
            unit.functions.push_back(parse_function());
        }
        return unit;
    }

private:
    [[noreturn]] void fail(const std::string& msg) {
        const Token& t = peek();
        throw ParseError(file_id_, t.line, t.col, msg);
    }

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        if (i >= tokens_.size()) i = tokens_.size() - 1;
        return tokens_[i];
    }
    const Token& next() {
        const Token& t = peek();
        if (t.kind != Token::Kind::Eof) ++pos_;
        return t;
    }
    bool at_eof() const { return peek().kind == Token::Kind::Eof; }

    bool accept_punct(std::string_view p) {
        if (peek().is_punct(p)) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect_punct(std::string_view p) {
        if (!accept_punct(p)) fail("expected '" + std::string(p) + "'");
    }
    bool accept_keyword(std::string_view k) {
        if (peek().is_ident(k)) {
            ++pos_;
            return true;
        }
        return false;
    }
    std::string expect_ident(const char* what) {
        const Token& t = peek();
        if (t.kind != Token::Kind::Ident || kKeywords.count(t.text)) {
            fail(std::string("expected ") + what);
        }
        ++pos_;
        return t.text;
    }

    Type parse_type() {
        const Token& t = peek();
        if (t.kind == Token::Kind::Ident) {
            if (auto ty = type_from_name(t.text)) {
                ++pos_;
                return *ty;
            }
        }
        fail("expected type name (Int, Str, Bool or Unit)");
    }

    FunctionDef parse_function() {
        if (!accept_keyword("fn")) fail("expected 'fn'");
        FunctionDef fn;
        fn.file_id = file_id_;
        fn.name = expect_ident("function name");
        if (fn.name == kForwardCallName || fn.name == kPrintName) {
            fail("'" + fn.name + "' is a reserved builtin name");
        }
        expect_punct("(");
        if (!peek().is_punct(")")) {
            do {
                Param p;
                p.name = expect_ident("parameter name");
                expect_punct(":");
                p.type = parse_type();
                fn.params.push_back(std::move(p));
            } while (accept_punct(","));
        }
        expect_punct(")");
        fn.return_type = accept_punct("->") ? parse_type() : Type::Unit;
        fn.body = parse_block();
        return fn;
    }

    std::vector<StmtPtr> parse_block() {
        expect_punct("{");
        std::vector<StmtPtr> stmts;
        while (!peek().is_punct("}")) {
            if (at_eof()) fail("unexpected end of file inside block");
            stmts.push_back(parse_stmt());
        }
        expect_punct("}");
        return stmts;
    }

    StmtPtr parse_stmt() {
        auto stmt = std::make_unique<Stmt>();
        const Token& start = peek();
        stmt->span.begin = start.span.begin;

        if (accept_keyword("let")) {
            stmt->kind = Stmt::Kind::Let;
            stmt->name = expect_ident("variable name");
            expect_punct("=");
            stmt->expr = parse_expr();
            expect_punct(";");
        } else if (accept_keyword("if")) {
            stmt->kind = Stmt::Kind::If;
            stmt->expr = parse_expr();
            stmt->body = parse_block();
            if (accept_keyword("else")) {
                if (peek().is_ident("if")) {
                    stmt->else_body.push_back(parse_stmt());
                } else {
                    stmt->else_body = parse_block();
                }
            }
        } else if (accept_keyword("while")) {
            stmt->kind = Stmt::Kind::While;
            stmt->expr = parse_expr();
            stmt->body = parse_block();
        } else if (accept_keyword("return")) {
            stmt->kind = Stmt::Kind::Return;
            if (!peek().is_punct(";")) stmt->expr = parse_expr();
            expect_punct(";");
        } else if (peek().kind == Token::Kind::Ident && !kKeywords.count(peek().text) &&
                   peek(1).is_punct("=")) {
            stmt->kind = Stmt::Kind::Assign;
            stmt->name = expect_ident("variable name");
            expect_punct("=");
            stmt->expr = parse_expr();
            expect_punct(";");
        } else {
            stmt->kind = Stmt::Kind::ExprStmt;
            stmt->expr = parse_expr();
            expect_punct(";");
        }
        stmt->span.end = tokens_[pos_ > 0 ? pos_ - 1 : 0].span.end;
        return stmt;
    }

    ExprPtr parse_expr() { return parse_or(); }

    ExprPtr make_binary(std::string op, ExprPtr lhs, ExprPtr rhs) {
        auto e = std::make_unique<Expr>();
        e->kind = Expr::Kind::Binary;
        e->name = std::move(op);
        e->span = {lhs->span.begin, rhs->span.end};
        e->args.push_back(std::move(lhs));
        e->args.push_back(std::move(rhs));
        return e;
    }

    ExprPtr parse_or() {
        auto lhs = parse_and();
        while (peek().is_punct("||")) {
            next();
            lhs = make_binary("||", std::move(lhs), parse_and());
        }
        return lhs;
    }
    ExprPtr parse_and() {
        auto lhs = parse_equality();
        while (peek().is_punct("&&")) {
            next();
            lhs = make_binary("&&", std::move(lhs), parse_equality());
        }
        return lhs;
    }
    ExprPtr parse_equality() {
        auto lhs = parse_relational();
        while (peek().is_punct("==") || peek().is_punct("!=")) {
            std::string op = next().text;
            lhs = make_binary(std::move(op), std::move(lhs), parse_relational());
        }
        return lhs;
    }
    ExprPtr parse_relational() {
        auto lhs = parse_additive();
        while (peek().is_punct("<") || peek().is_punct("<=") || peek().is_punct(">") ||
               peek().is_punct(">=")) {
            std::string op = next().text;
            lhs = make_binary(std::move(op), std::move(lhs), parse_additive());
        }
        return lhs;
    }
    ExprPtr parse_additive() {
        auto lhs = parse_multiplicative();
        while (peek().is_punct("+") || peek().is_punct("-")) {
            std::string op = next().text;
            lhs = make_binary(std::move(op), std::move(lhs), parse_multiplicative());
        }
        return lhs;
    }
    ExprPtr parse_multiplicative() {
        auto lhs = parse_unary();
        while (peek().is_punct("*") || peek().is_punct("/") || peek().is_punct("%")) {
            std::string op = next().text;
            lhs = make_binary(std::move(op), std::move(lhs), parse_unary());
        }
        return lhs;
    }
    ExprPtr parse_unary() {
        if (peek().is_punct("-") || peek().is_punct("!")) {
            const Token& op = next();
            auto e = std::make_unique<Expr>();
            e->kind = Expr::Kind::Unary;
            e->name = op.text;
            e->span.begin = op.span.begin;
            e->args.push_back(parse_unary());
            e->span.end = e->args[0]->span.end;
            return e;
        }
        return parse_primary();
    }

    std::vector<ExprPtr> parse_args() {
        std::vector<ExprPtr> args;
        expect_punct("(");
        if (!peek().is_punct(")")) {
            do {
                args.push_back(parse_expr());
            } while (accept_punct(","));
        }
        expect_punct(")");
        return args;
    }

    ExprPtr parse_primary() {
        const Token& t = peek();
        auto e = std::make_unique<Expr>();
        e->span = t.span;

        if (t.kind == Token::Kind::Int) {
            next();
            e->kind = Expr::Kind::IntLit;
            try {
                e->int_val = std::stoll(t.text);
            } catch (const std::exception&) {
                throw ParseError(file_id_, t.line, t.col, "integer literal out of range");
            }
            e->str_val = t.text;
            return e;
        }
        if (t.kind == Token::Kind::Str) {
            next();
            e->kind = Expr::Kind::StrLit;
            e->str_val = t.str_value;
            return e;
        }
        if (t.is_ident("true") || t.is_ident("false")) {
            next();
            e->kind = Expr::Kind::BoolLit;
            e->bool_val = t.text == "true";
            return e;
        }
        if (t.is_punct("(")) {
            next();
            auto inner = parse_expr();
            expect_punct(")");
            inner->span = {t.span.begin, tokens_[pos_ - 1].span.end};
            return inner;
        }
        if (t.kind == Token::Kind::Ident && !kKeywords.count(t.text)) {
            // forward_call(...), file.fn(...), fn(...), or a plain variable.
            if (t.text == kForwardCallName) {
                next();
                e->kind = Expr::Kind::ForwardCall;
                e->name = t.text;
                e->args = parse_args();
                if (e->args.empty()) fail("forward_call needs a sealed descriptor argument");
                e->span.end = tokens_[pos_ - 1].span.end;
                return e;
            }
            if (peek(1).is_punct(".") && peek(2).kind == Token::Kind::Ident &&
                peek(3).is_punct("(")) {
                next();  // file id
                next();  // '.'
                e->kind = Expr::Kind::Call;
                e->target_file = t.text;
                e->name = expect_ident("function name");
                e->args = parse_args();
                e->span.end = tokens_[pos_ - 1].span.end;
                return e;
            }
            if (peek(1).is_punct("(")) {
                next();
                e->kind = Expr::Kind::Call;
                e->name = t.text;
                e->args = parse_args();
                e->span.end = tokens_[pos_ - 1].span.end;
                return e;
            }
            next();
            e->kind = Expr::Kind::Var;
            e->name = t.text;
            return e;
        }
        fail("expected expression");
    }

    std::string file_id_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

// Post-parse pass: resolve call targets and collect call sites.
class Resolver {
public:
    explicit Resolver(Program& program) : program_(program) {
        for (const auto& unit : program.units) {
            for (const auto& fn : unit.functions) {
                auto key = fn.file_id + "." + fn.name + "/" + std::to_string(fn.params.size());
                if (!defs_.emplace(std::move(key), &fn).second) {
                    throw ResolveError("duplicate function definition: " + fn.file_id + "." +
                                       fn.name + " with arity " +
                                       std::to_string(fn.params.size()));
                }
            }
        }
    }

    void resolve() {
        for (auto& unit : program_.units) {
            for (auto& fn : unit.functions) {
                for (auto& stmt : fn.body) walk_stmt(fn, *stmt);
            }
        }
        // Deterministic (file, span) order regardless of traversal details.
        std::sort(program_.call_sites.begin(), program_.call_sites.end(),
                  [](const CallSite& a, const CallSite& b) {
                      if (a.caller_file != b.caller_file) return a.caller_file < b.caller_file;
                      return a.span.begin < b.span.begin;
                  });
    }

private:
    void walk_stmt(const FunctionDef& fn, Stmt& stmt) {
        if (stmt.expr) walk_expr(fn, *stmt.expr);
        for (auto& s : stmt.body) walk_stmt(fn, *s);
        for (auto& s : stmt.else_body) walk_stmt(fn, *s);
    }

    void walk_expr(const FunctionDef& fn, Expr& expr) {
        for (auto& a : expr.args) walk_expr(fn, *a);
        if (expr.kind != Expr::Kind::Call) return;
        if (expr.target_file.empty() && expr.name == kPrintName) {
            if (expr.args.size() != 1) {
                throw ResolveError("print takes exactly one argument (called from " +
                                   fn.file_id + "." + fn.name + ")");
            }
            return;
        }

        std::string callee_file = expr.target_file.empty() ? fn.file_id : expr.target_file;
        auto key = callee_file + "." + expr.name + "/" + std::to_string(expr.args.size());
        if (!defs_.count(key)) {
            throw ResolveError("unknown callee " + callee_file + "." + expr.name + " with arity " +
                               std::to_string(expr.args.size()) + " (called from " + fn.file_id +
                               "." + fn.name + ")");
        }

        CallSite site;
        site.caller_file = fn.file_id;
        site.caller_fn = fn.name;
        site.callee_file = std::move(callee_file);
        site.callee_name = expr.name;
        site.arity = expr.args.size();
        site.span = expr.span;
        for (const auto& a : expr.args) {
            ArgInfo info;
            info.span = a->span;
            switch (a->kind) {
                case Expr::Kind::IntLit:
                    info.is_literal = true;
                    info.literal_type = Type::Int;
                    info.literal_text = a->str_val;
                    break;
                case Expr::Kind::StrLit:
                    info.is_literal = true;
                    info.literal_type = Type::Str;
                    info.literal_text = a->str_val;
                    break;
                case Expr::Kind::BoolLit:
                    info.is_literal = true;
                    info.literal_type = Type::Bool;
                    info.literal_text = a->bool_val ? "true" : "false";
                    break;
                default:
                    info.is_literal = false;
                    break;
            }
            site.args.push_back(std::move(info));
        }
        program_.call_sites.push_back(std::move(site));
    }

    Program& program_;
    std::unordered_map<std::string, const FunctionDef*> defs_;
};

}  // namespace

Program parse(std::vector<canon::SourceFile> files, std::string entry_file,
              std::string entry_fn) {
    Program program;
    program.files = std::move(files);
    program.entry_file = std::move(entry_file);
    program.entry_fn = std::move(entry_fn);

    std::set<std::string> seen_ids;
    for (const auto& f : program.files) {
        if (!seen_ids.insert(f.file_id).second) {
            throw ResolveError("duplicate file id: " + f.file_id);
        }
        FileParser parser(f);
        program.units.push_back(parser.parse_file());
    }

    Resolver resolver(program);
    resolver.resolve();

    const FunctionDef* entry = program.find_function(program.entry_file, program.entry_fn, 0);
    if (!entry) {
        throw ResolveError("entry function " + program.entry_file + "." + program.entry_fn +
                           " not found or not zero-argument");
    }
    return program;
}

}  // namespace routeseal::minilang

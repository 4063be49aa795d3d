#include "routeseal/interp.hpp"

#include <cstdint>
#include <limits>
#include <map>
#include <utility>
#include <variant>

#include "routeseal/registry.hpp"
#include "routeseal/router.hpp"

namespace routeseal::minilang {

std::string_view exit_status_name(ExitStatus s) {
    switch (s) {
        case ExitStatus::Normal: return "Normal";
        case ExitStatus::TamperDetected: return "TamperDetected";
        case ExitStatus::RuntimeError: return "RuntimeError";
    }
    return "RuntimeError";
}

FunctionRegistry build_registry(const Program& program) {
    FunctionRegistry registry;
    for (const auto& unit : program.units) {
        for (const auto& fn : unit.functions) registry.insert(fn);
    }
    return registry;
}

namespace {

struct RuntimeFault {
    std::string message;
};

struct ReturnSignal {
    Value value;
};

[[noreturn]] void fault(std::string message) { throw RuntimeFault{std::move(message)}; }

std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) +
                                     static_cast<std::uint64_t>(b));
}
std::int64_t wrap_sub(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) -
                                     static_cast<std::uint64_t>(b));
}
std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) *
                                     static_cast<std::uint64_t>(b));
}
std::int64_t wrap_neg(std::int64_t a) {
    return static_cast<std::int64_t>(0 - static_cast<std::uint64_t>(a));
}

class Interp {
public:
    Interp(const Program& program, router::RouterState* router)
        : program_(program), router_(router), registry_(build_registry(program)) {}

    ExitReport run_entry() {
        ExitReport report;
        const FunctionDef* entry = registry_.lookup(program_.entry_file, program_.entry_fn, 0);
        if (!entry) {
            report.status = ExitStatus::RuntimeError;
            report.error = "entry function " + program_.entry_file + "." + program_.entry_fn +
                           " not found";
            return report;
        }

        struct Detach {
            router::RouterState* router;
            ~Detach() {
                if (router) router->detach();
            }
        } detach{router_};
        if (router_) {
            router_->attach(&registry_, [this](const FunctionDef& fn, std::vector<Value> args) {
                return call_function(fn, std::move(args));
            });
        }

        try {
            call_function(*entry, {});
            report.status = ExitStatus::Normal;
        } catch (const RuntimeFault& f) {
            report.status = ExitStatus::RuntimeError;
            report.error = f.message;
        } catch (const router::TamperSignal& sig) {
            report.status = ExitStatus::TamperDetected;
            report.tamper_message = sig.report.message();
            output_.push_back(report.tamper_message);
        }
        report.output = std::move(output_);
        return report;
    }

    Value call_function(const FunctionDef& fn, std::vector<Value> args) {
        if (depth_ >= kMaxCallDepth)
            fault("call depth limit exceeded in " + fn.file_id + "." + fn.name);
        if (args.size() != fn.params.size())
            fault("wrong argument count for " + fn.file_id + "." + fn.name);
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (value_type(args[i]) != fn.params[i].type) {
                fault("argument '" + fn.params[i].name + "' of " + fn.file_id + "." + fn.name +
                      " expects " + std::string(type_name(fn.params[i].type)) + ", got " +
                      std::string(type_name(value_type(args[i]))));
            }
        }

        Frame frame;
        frame.fn = &fn;
        frame.scopes.emplace_back();
        for (std::size_t i = 0; i < args.size(); ++i) {
            frame.scopes.back().emplace(fn.params[i].name, std::move(args[i]));
        }
        frames_.push_back(std::move(frame));
        ++depth_;
        struct Pop {
            Interp* self;
            ~Pop() {
                self->frames_.pop_back();
                --self->depth_;
            }
        } pop{this};

        Value result{};
        try {
            exec_block(fn.body);
        } catch (ReturnSignal& r) {
            result = std::move(r.value);
        }
        if (value_type(result) != fn.return_type) {
            fault(fn.file_id + "." + fn.name + " must return " +
                  std::string(type_name(fn.return_type)) + ", got " +
                  std::string(type_name(value_type(result))));
        }
        return result;
    }

private:
    struct Frame {
        const FunctionDef* fn = nullptr;
        std::vector<std::map<std::string, Value>> scopes;
    };

    void exec_block(const std::vector<StmtPtr>& body) {
        frames_.back().scopes.emplace_back();
        struct Pop {
            Interp* self;
            ~Pop() { self->frames_.back().scopes.pop_back(); }
        } pop{this};
        for (const auto& stmt : body) exec(*stmt);
    }

    void exec(const Stmt& stmt) {
        switch (stmt.kind) {
            case Stmt::Kind::Let: {
                Value v = eval(*stmt.expr);
                auto& scope = frames_.back().scopes.back();
                if (!scope.emplace(stmt.name, std::move(v)).second)
                    fault("variable '" + stmt.name + "' already declared in this scope");
                return;
            }
            case Stmt::Kind::Assign: {
                Value v = eval(*stmt.expr);
                Value* slot = find_var(stmt.name);
                if (!slot) fault("assignment to undeclared variable '" + stmt.name + "'");
                if (value_type(*slot) != value_type(v)) {
                    fault("assignment changes type of '" + stmt.name + "' from " +
                          std::string(type_name(value_type(*slot))) + " to " +
                          std::string(type_name(value_type(v))));
                }
                *slot = std::move(v);
                return;
            }
            case Stmt::Kind::If: {
                Value cond = eval(*stmt.expr);
                if (!std::holds_alternative<bool>(cond)) fault("if condition must be Bool");
                if (std::get<bool>(cond)) {
                    exec_block(stmt.body);
                } else {
                    exec_block(stmt.else_body);
                }
                return;
            }
            case Stmt::Kind::While: {
                while (true) {
                    Value cond = eval(*stmt.expr);
                    if (!std::holds_alternative<bool>(cond))
                        fault("while condition must be Bool");
                    if (!std::get<bool>(cond)) break;
                    exec_block(stmt.body);
                }
                return;
            }
            case Stmt::Kind::Return: {
                ReturnSignal r;
                if (stmt.expr) r.value = eval(*stmt.expr);
                throw r;
            }
            case Stmt::Kind::ExprStmt: {
                eval(*stmt.expr);
                return;
            }
        }
    }

    Value* find_var(const std::string& name) {
        auto& scopes = frames_.back().scopes;
        for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
            auto found = it->find(name);
            if (found != it->end()) return &found->second;
        }
        return nullptr;
    }

    Value eval(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::IntLit: return Value{e.int_val};
            case Expr::Kind::StrLit: return Value{e.str_val};
            case Expr::Kind::BoolLit: return Value{e.bool_val};
            case Expr::Kind::Var: {
                Value* slot = find_var(e.name);
                if (!slot) fault("unknown variable '" + e.name + "'");
                return *slot;
            }
            case Expr::Kind::Unary: return eval_unary(e);
            case Expr::Kind::Binary: return eval_binary(e);
            case Expr::Kind::Call: return eval_call(e);
            case Expr::Kind::ForwardCall: return eval_forward(e);
        }
        fault("unreachable expression kind");
    }

    Value eval_unary(const Expr& e) {
        Value v = eval(*e.args[0]);
        if (e.name == "-") {
            if (!std::holds_alternative<std::int64_t>(v)) fault("unary '-' needs Int");
            return Value{wrap_neg(std::get<std::int64_t>(v))};
        }
        if (e.name == "!") {
            if (!std::holds_alternative<bool>(v)) fault("unary '!' needs Bool");
            return Value{!std::get<bool>(v)};
        }
        fault("unknown unary operator '" + e.name + "'");
    }

    Value eval_binary(const Expr& e) {
        if (e.name == "&&" || e.name == "||") {
            Value l = eval(*e.args[0]);
            if (!std::holds_alternative<bool>(l))
                fault("'" + e.name + "' needs Bool operands");
            bool lb = std::get<bool>(l);
            if (e.name == "&&" && !lb) return Value{false};
            if (e.name == "||" && lb) return Value{true};
            Value r = eval(*e.args[1]);
            if (!std::holds_alternative<bool>(r))
                fault("'" + e.name + "' needs Bool operands");
            return r;
        }

        Value l = eval(*e.args[0]);
        Value r = eval(*e.args[1]);

        if (e.name == "==" || e.name == "!=") {
            if (value_type(l) != value_type(r)) fault("'" + e.name + "' compares mixed types");
            bool eq = l == r;
            return Value{e.name == "==" ? eq : !eq};
        }

        if (e.name == "+") {
            if (std::holds_alternative<std::string>(l) &&
                std::holds_alternative<std::string>(r)) {
                return Value{std::get<std::string>(l) + std::get<std::string>(r)};
            }
            if (std::holds_alternative<std::int64_t>(l) &&
                std::holds_alternative<std::int64_t>(r)) {
                return Value{wrap_add(std::get<std::int64_t>(l), std::get<std::int64_t>(r))};
            }
            fault("'+' needs two Ints or two Strs");
        }

        auto ints = [&]() -> std::pair<std::int64_t, std::int64_t> {
            if (!std::holds_alternative<std::int64_t>(l) ||
                !std::holds_alternative<std::int64_t>(r))
                fault("'" + e.name + "' needs Int operands");
            return {std::get<std::int64_t>(l), std::get<std::int64_t>(r)};
        };

        if (e.name == "-") {
            auto [a, b] = ints();
            return Value{wrap_sub(a, b)};
        }
        if (e.name == "*") {
            auto [a, b] = ints();
            return Value{wrap_mul(a, b)};
        }
        if (e.name == "/") {
            auto [a, b] = ints();
            if (b == 0) fault("division by zero");
            if (a == std::numeric_limits<std::int64_t>::min() && b == -1)
                return Value{a};
            return Value{a / b};
        }
        if (e.name == "%") {
            auto [a, b] = ints();
            if (b == 0) fault("modulo by zero");
            if (a == std::numeric_limits<std::int64_t>::min() && b == -1)
                return Value{std::int64_t{0}};
            return Value{a % b};
        }
        if (e.name == "<" || e.name == "<=" || e.name == ">" || e.name == ">=") {
            auto [a, b] = ints();
            bool v = e.name == "<" ? a < b : e.name == "<=" ? a <= b : e.name == ">" ? a > b
                                                                                     : a >= b;
            return Value{v};
        }
        fault("unknown binary operator '" + e.name + "'");
    }

    Value eval_call(const Expr& e) {
        if (e.target_file.empty() && e.name == kPrintName) {
            Value v = eval(*e.args[0]);
            output_.push_back(value_to_string(v));
            return Value{};
        }

        std::vector<Value> args;
        args.reserve(e.args.size());
        for (const auto& a : e.args) args.push_back(eval(*a));

        const std::string& file =
            e.target_file.empty() ? frames_.back().fn->file_id : e.target_file;
        const FunctionDef* fn = registry_.lookup(file, e.name, args.size());
        if (!fn) {
            fault("unknown function " + file + "." + e.name + " with arity " +
                  std::to_string(args.size()));
        }
        return call_function(*fn, std::move(args));
    }

    Value eval_forward(const Expr& e) {
        if (!router_) fault("forward_call requires a router");
        Value first = eval(*e.args[0]);
        if (!std::holds_alternative<std::string>(first))
            fault("forward_call needs a Str descriptor as first argument");
        std::vector<Value> rest;
        rest.reserve(e.args.size() - 1);
        for (std::size_t i = 1; i < e.args.size(); ++i) rest.push_back(eval(*e.args[i]));
        return router_->forward_call(frames_.back().fn->file_id, std::get<std::string>(first),
                                     std::move(rest));
    }

    const Program& program_;
    router::RouterState* router_;
    FunctionRegistry registry_;
    std::vector<Frame> frames_;
    std::vector<std::string> output_;
    std::size_t depth_ = 0;
};

}  // namespace

ExitReport run(const Program& program, router::RouterState* router) {
    Interp interp(program, router);
    return interp.run_entry();
}

}  // namespace routeseal::minilang

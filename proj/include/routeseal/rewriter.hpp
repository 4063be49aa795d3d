#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "routeseal/ast.hpp"
#include "routeseal/descriptor.hpp"

namespace routeseal::rewriter {

// Decides which call sites get routed. Selecting a same-file call is an
// error: routing only hides the cross-file call structure.
using Selection = std::function<bool(const minilang::CallSite&)>;

Selection select_all_cross_file();

// One rewritten call site. descriptor_span covers the quoted descriptor
// literal in the rewritten text so it can later be swapped for the sealed
// envelope without disturbing anything else.
struct RewriteRecord {
    std::string file_id;
    std::string callee_file;
    std::string callee_fn;
    std::size_t arity = 0;
    descriptor::CallDescriptor desc;
    std::string descriptor_text;
    minilang::Span descriptor_span{};
};

struct RewriteResult {
    std::map<std::string, std::string> files;  // file_id -> full text, every file present
    std::vector<RewriteRecord> records;        // ordered by (file_id, span)
};

// Replaces each selected call f.g(a, b, ...) with
// forward_call("<descriptor>", <runtime args...>). The longest prefix of
// literal arguments moves into the descriptor; the rest stay in place.
// Unselected files come back byte identical.
RewriteResult rewrite_calls(const minilang::Program& program, const Selection& selection);

// Routing hides which function a call reaches, but a return type carried by
// only one function in the whole project gives that callee away again.
struct LintWarning {
    std::string file_id;
    std::string fn;
    minilang::Type return_type = minilang::Type::Unit;
    std::size_t same_type_count = 1;  // functions in the project sharing the return type

    std::string format() const;
};

// Warns about every selected callee whose return type is unique across all
// function definitions.
std::vector<LintWarning> lint_return_types(const minilang::Program& program,
                                           const Selection& selection);

}  // namespace routeseal::rewriter

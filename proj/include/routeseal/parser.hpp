#pragma once

#include <string>
#include <vector>

#include "routeseal/ast.hpp"

namespace routeseal::minilang {

// Parses a multi-file project and resolves every call site.
// Throws ParseError on bad syntax, ResolveError on unknown callees or a bad
// entry point.
Program parse(std::vector<canon::SourceFile> files, std::string entry_file,
              std::string entry_fn);

}  // namespace routeseal::minilang

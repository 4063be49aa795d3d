#pragma once

#include <vector>

#include "routeseal/ast.hpp"
#include "routeseal/canon.hpp"
#include "routeseal/config.hpp"
#include "routeseal/cryptobox.hpp"
#include "routeseal/rewriter.hpp"

namespace routeseal::protector {

struct ProtectedProject {
    std::vector<canon::SourceFile> files;  // rewritten sources, sealed envelopes in place
    config::RouterConfig config;
    std::size_t sealed_count = 0;  // call sites routed and sealed
};

// Full protection pass: route the selected calls, hash the rewritten files,
// derive one key per callee from its callers' closed hashes, seal every
// descriptor, and assemble the dispatcher config. The canonical hash of each
// emitted file equals the hash taken before sealing; protect() verifies that
// fixpoint before returning.
ProtectedProject protect(const minilang::Program& program, const rewriter::Selection& selection,
                         cryptobox::RandomSource& rng);

}  // namespace routeseal::protector

#include "routeseal/protector.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "routeseal/closedhash.hpp"
#include "routeseal/depgraph.hpp"
#include "routeseal/errors.hpp"
#include "routeseal/lexer.hpp"

namespace routeseal::protector {

namespace {

std::map<std::string, Digest> hash_files(const std::map<std::string, std::string>& texts) {
    std::map<std::string, Digest> out;
    for (const auto& [file_id, text] : texts) {
        canon::SourceFile f{file_id, file_id + ".ml", text};
        out.emplace(file_id, canon::plain_hash(canon::canonicalize(f)));
    }
    return out;
}

}  // namespace

ProtectedProject protect(const minilang::Program& program, const rewriter::Selection& selection,
                         cryptobox::RandomSource& rng) {
    auto rewritten = rewriter::rewrite_calls(program, selection);
    auto plain = hash_files(rewritten.files);

    // The dependency relation reflects the original call structure; the
    // dispatcher itself never appears in it.
    auto dag = depgraph::break_cycles(depgraph::build_graph(program));
    auto table = closedhash::closed_hashes(dag, plain);

    std::map<std::string, std::set<std::string>> callers;
    for (const auto& [from, to] : dag.arcs) callers[to].insert(from);
    for (const auto& [from, to] : dag.removed_arcs) callers[to].insert(from);

    std::map<std::string, closedhash::KeyNonce> nonces;
    for (const auto& [callee, _] : callers) {
        closedhash::KeyNonce n;
        n.file_id = callee;
        auto bytes = cryptobox::gen_nonce(32, rng);
        std::copy(bytes.begin(), bytes.end(), n.nonce.begin());
        nonces.emplace(callee, n);
    }

    std::map<std::string, closedhash::SymmetricKey> keys;
    for (const auto& [callee, sources] : callers) {
        keys.emplace(callee, closedhash::derive_key(callee, sources, table, nonces.at(callee)));
    }

    // Seal in record order, then splice back to front so earlier spans stay
    // valid.
    std::map<std::string, std::vector<std::pair<minilang::Span, std::string>>> splices;
    for (const auto& rec : rewritten.records) {
        auto key_it = keys.find(rec.callee_file);
        if (key_it == keys.end())
            throw Error("internal: no key derived for callee " + rec.callee_file);
        auto sealed = cryptobox::seal(key_it->second, rec.descriptor_text, rng);
        splices[rec.file_id].emplace_back(rec.descriptor_span,
                                          minilang::render_string_literal(sealed.encode()));
    }
    for (auto& [file_id, list] : splices) {
        std::sort(list.begin(), list.end(),
                  [](const auto& a, const auto& b) { return a.first.begin > b.first.begin; });
        std::string& text = rewritten.files.at(file_id);
        for (const auto& [span, literal] : list) {
            text.replace(span.begin, span.end - span.begin, literal);
        }
    }

    ProtectedProject out;
    out.sealed_count = rewritten.records.size();
    for (const auto& src : program.files) {
        out.files.push_back(canon::SourceFile{src.file_id, src.file_id + ".ml",
                                              rewritten.files.at(src.file_id)});
    }

    out.config.format_version = 1;
    out.config.entry_file = program.entry_file;
    out.config.entry_fn = program.entry_fn;
    out.config.file_hashes = table.closed;
    for (const auto& [callee, nonce] : nonces) out.config.nonces.emplace(callee, nonce.nonce);
    out.config.deps = dag.arcs;
    out.config.removed = dag.removed_arcs;

    // Sealing must not have moved any hash: the canonical form masks sealed
    // arguments, so the emitted bytes hash exactly as the pre-seal bytes did.
    std::map<std::string, std::string> emitted;
    for (const auto& f : out.files) emitted.emplace(f.file_id, f.text);
    auto recheck = closedhash::closed_hashes(dag, hash_files(emitted));
    if (recheck.closed != table.closed)
        throw Error("internal: canonical hash changed during sealing");

    return out;
}

}  // namespace routeseal::protector

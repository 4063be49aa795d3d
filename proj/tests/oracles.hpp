#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "routeseal/canon.hpp"
#include "routeseal/depgraph.hpp"
#include "routeseal/digest.hpp"
#include "routeseal/manifest.hpp"
#include "routeseal/protector.hpp"

// Test-side reference implementations and harness plumbing. Everything here
// is deliberately written from first principles (or shells out to other
// tools) so the library under test never validates itself.
namespace routeseal::testing {

// Straight FIPS-197 AES-256 in CBC mode with PKCS#7 padding, encrypt only.
// Table-based, no crypto library involved.
std::vector<std::uint8_t> aes256_cbc_encrypt_ref(const std::array<std::uint8_t, 32>& key,
                                                 const std::array<std::uint8_t, 16>& iv,
                                                 std::span<const std::uint8_t> plaintext);

// Definitional expansion of the closed hash: plain hash of the node XORed
// with the full recursive expansion of each direct dependency. No topological
// order, no memo.
Digest brute_force_closed_hash(const std::string& node, const std::set<depgraph::Arc>& arcs,
                               const std::map<std::string, Digest>& plain);

struct RandomDag {
    depgraph::DependencyGraph dag;
    std::map<std::string, Digest> plain;
};

// Acyclic by construction: arcs only point from higher-numbered nodes to
// lower-numbered ones.
RandomDag random_dag(std::mt19937_64& rng, int max_nodes = 8);

// Variants of `text` that change only layout: whitespace runs and comments
// inserted between tokens. The token stream is untouched.
std::vector<std::string> layout_only_mutations(const std::string& text,
                                               const std::string& file_id, int count,
                                               std::mt19937_64& rng);

struct TokenMutation {
    std::string text;        // full mutated source
    std::string token_text;  // original token lexeme
    std::size_t token_index = 0;
};

// One mutated source per non-comment token. Mutants may fail to lex or
// parse; they only need to differ in exactly one token's bytes.
std::vector<TokenMutation> single_token_mutations(const std::string& text,
                                                  const std::string& file_id);

struct GeneratedProject {
    std::vector<canon::SourceFile> files;
    std::string entry_file;
    std::string entry_fn;
    std::vector<std::string> expected_output;
    std::size_t cross_file_sites = 0;
};

// main.ml with `call_count` cross-file call statements spread over four
// utility files, printing the accumulated value at the end.
GeneratedProject make_big_project(std::size_t call_count = 200);

struct ProcResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// Runs an arbitrary program; argv[0] is the executable path.
ProcResult run_process(const std::vector<std::string>& argv);

// Runs the real CLI binary with the given arguments.
ProcResult run_cli(const std::vector<std::string>& args);

class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

// Loads fixtures/<name>/ from the source tree.
std::vector<canon::SourceFile> load_fixture(const std::string& name,
                                            manifest::ProjectManifest* out_manifest = nullptr);

std::filesystem::path fixture_dir(const std::string& name);

// Writes <file_id>.ml files plus router.cfg, the layout `run` expects.
void write_protected(const protector::ProtectedProject& project,
                     const std::filesystem::path& dir);

}  // namespace routeseal::testing

#include "routeseal/rewriter.hpp"

#include <algorithm>
#include <utility>

#include "routeseal/errors.hpp"
#include "routeseal/lexer.hpp"

namespace routeseal::rewriter {

using minilang::CallSite;
using minilang::FunctionDef;
using minilang::Program;

namespace {

descriptor::CallDescriptor make_descriptor(const CallSite& site) {
    descriptor::CallDescriptor d;
    d.dst_file = site.callee_file;
    d.method = site.callee_name;
    std::size_t i = 0;
    while (i < site.args.size() && site.args[i].is_literal) {
        d.literal_types.emplace_back(minilang::type_name(site.args[i].literal_type));
        d.literal_values.push_back(site.args[i].literal_text);
        ++i;
    }
    d.runtime_arg_count = site.args.size() - i;
    return d;
}

class FileRewriter {
public:
    FileRewriter(const std::string& file_id, const std::string& text,
                 std::vector<const CallSite*> sites, std::vector<RewriteRecord>& records)
        : file_id_(file_id), text_(text), sites_(std::move(sites)), records_(records) {}

    std::string run() {
        out_.reserve(text_.size() + sites_.size() * 64);
        emit_range(0, text_.size());
        return std::move(out_);
    }

private:
    void emit_range(std::size_t lo, std::size_t hi) {
        std::size_t pos = lo;
        while (idx_ < sites_.size() && sites_[idx_]->span.begin < hi) {
            const CallSite& site = *sites_[idx_];
            out_.append(text_, pos, site.span.begin - pos);
            ++idx_;
            emit_site(site);
            pos = site.span.end;
        }
        out_.append(text_, pos, hi - pos);
    }

    void emit_site(const CallSite& site) {
        RewriteRecord rec;
        rec.file_id = file_id_;
        rec.callee_file = site.callee_file;
        rec.callee_fn = site.callee_name;
        rec.arity = site.arity;
        rec.desc = make_descriptor(site);
        rec.descriptor_text = descriptor::encode_descriptor(rec.desc);

        out_ += minilang::kForwardCallName;
        out_ += '(';
        rec.descriptor_span.begin = out_.size();
        out_ += minilang::render_string_literal(rec.descriptor_text);
        rec.descriptor_span.end = out_.size();

        std::size_t first_runtime = site.args.size() - rec.desc.runtime_arg_count;
        for (std::size_t i = first_runtime; i < site.args.size(); ++i) {
            out_ += ", ";
            emit_range(site.args[i].span.begin, site.args[i].span.end);
        }
        out_ += ')';
        records_.push_back(std::move(rec));
    }

    const std::string& file_id_;
    const std::string& text_;
    std::vector<const CallSite*> sites_;
    std::vector<RewriteRecord>& records_;
    std::string out_;
    std::size_t idx_ = 0;
};

}  // namespace

Selection select_all_cross_file() {
    return [](const CallSite& site) { return site.cross_file(); };
}

RewriteResult rewrite_calls(const Program& program, const Selection& selection) {
    std::map<std::string, std::vector<const CallSite*>> selected;
    for (const auto& site : program.call_sites) {
        if (!selection(site)) continue;
        if (!site.cross_file()) {
            throw SelectionError("cannot route same-file call " + site.caller_file + "." +
                                 site.callee_name + " inside " + site.caller_file);
        }
        selected[site.caller_file].push_back(&site);
    }
    for (auto& [_, sites] : selected) {
        std::sort(sites.begin(), sites.end(), [](const CallSite* a, const CallSite* b) {
            return a->span.begin < b->span.begin;
        });
    }

    RewriteResult result;
    for (const auto& src : program.files) {
        auto it = selected.find(src.file_id);
        if (it == selected.end()) {
            result.files.emplace(src.file_id, src.text);
            continue;
        }
        FileRewriter rw(src.file_id, src.text, it->second, result.records);
        result.files.emplace(src.file_id, rw.run());
    }

    std::sort(result.records.begin(), result.records.end(),
              [](const RewriteRecord& a, const RewriteRecord& b) {
                  if (a.file_id != b.file_id) return a.file_id < b.file_id;
                  return a.descriptor_span.begin < b.descriptor_span.begin;
              });
    return result;
}

std::string LintWarning::format() const {
    std::string out = "WARN unique-return-type ";
    out += file_id;
    out += '.';
    out += fn;
    out += " -> ";
    out += minilang::type_name(return_type);
    return out;
}

std::vector<LintWarning> lint_return_types(const Program& program, const Selection& selection) {
    std::map<minilang::Type, std::size_t> type_counts;
    for (const auto& unit : program.units) {
        for (const auto& fn : unit.functions) ++type_counts[fn.return_type];
    }

    std::map<std::pair<std::string, std::string>, const FunctionDef*> callees;
    for (const auto& site : program.call_sites) {
        if (!selection(site)) continue;
        const FunctionDef* def =
            program.find_function(site.callee_file, site.callee_name, site.arity);
        if (def) callees.emplace(std::make_pair(def->file_id, def->name), def);
    }

    std::vector<LintWarning> warnings;
    for (const auto& [key, def] : callees) {
        std::size_t count = type_counts[def->return_type];
        if (count != 1) continue;
        warnings.push_back(LintWarning{key.first, key.second, def->return_type, count});
    }
    return warnings;
}

}  // namespace routeseal::rewriter

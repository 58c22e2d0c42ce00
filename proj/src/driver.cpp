#include "qtt/driver.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "qtt/pretty.hpp"

namespace qtt::driver {

namespace fs = std::filesystem;
namespace vl = kernel::vl;
using json = nlohmann::ordered_json;

// ---------------------------------------------------------------- modules

std::optional<std::size_t> Module::find(const std::string& name) const {
    for (std::size_t i = 0; i < sig.entries.size(); ++i)
        if (sig.entries[i].name == name) return i;
    return std::nullopt;
}

bool Module::sabotaged() const {
    return std::find(pragmas.begin(), pragmas.end(), "sabotage halve-potential") != pragmas.end();
}

std::optional<std::string> Module::family_for(const std::string& decl) const {
    for (const auto& p : pragmas) {
        std::istringstream in(p);
        std::string word, target, generator;
        if (in >> word >> target >> generator && word == "family" && target == decl) return generator;
    }
    return std::nullopt;
}

Module load_text(const std::string& text, const std::string& path, const Options& opts) {
    Module m;
    m.path = path;
    frontend::ResolvedModule rm;
    try {
        rm = frontend::resolve(frontend::parse(text), opts.regime);
    } catch (const DiagnosticError& e) {
        m.diagnostics.push_back(e.diagnostic());
        return m;
    }
    m.parsed = true;
    m.sig.regime = rm.regime;
    m.pragmas = rm.pragmas;
    m.decls = rm.decls;
    for (const auto& d : m.decls) {
        try {
            kernel::check_declaration(m.sig, d, opts.sigma);
        } catch (const DiagnosticError& e) {
            Diagnostic diag = e.diagnostic();
            if (!diag.span.known()) diag.span = d.span;
            diag.message = "in '" + d.name + "': " + diag.message;
            m.diagnostics.push_back(std::move(diag));
        }
    }
    return m;
}

Module load_file(const std::string& path, const Options& opts) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        Module m;
        m.path = path;
        m.diagnostics.push_back(Diagnostic{Severity::Error, "cannot read file", {}, "IO"});
        return m;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return load_text(ss.str(), path, opts);
}

std::vector<std::string> zeroing_failures(const Module& m) {
    std::vector<std::string> failed;
    for (std::size_t i = 0; i < m.sig.entries.size(); ++i) {
        const auto& e = m.sig.entries[i];
        if (!e.ok || e.sigma != kernel::Fragment::One) continue;
        kernel::Signature prefix;
        prefix.regime = m.sig.regime;
        prefix.entries.assign(m.sig.entries.begin(), m.sig.entries.begin() + static_cast<std::ptrdiff_t>(i));
        try {
            kernel::check_declaration(prefix, m.decls.at(i), kernel::Fragment::Zero);
        } catch (const DiagnosticError&) {
            failed.push_back(e.name);
        }
    }
    return failed;
}

compile::CompiledProgram compile_decl(const Module& m, std::size_t index) {
    auto p = compile::compile_declaration(m.sig, index);
    return m.sabotaged() ? compile::sabotage_halve(std::move(p)) : p;
}

kernel::Val domain_type(const Module& m, std::size_t index) {
    const auto* pi = kernel::as<vl::Pi>(m.sig.entries.at(index).typeVal);
    if (!pi) throw std::invalid_argument("declaration '" + m.sig.entries[index].name + "' is not a function");
    return pi->dom;
}

kernel::Val result_type(kernel::Evaluator& ev, const Module& m, std::size_t index, const kernel::Val& input) {
    const auto& t = m.sig.entries.at(index).typeVal;
    if (const auto* pi = kernel::as<vl::Pi>(t)) return ev.apply(pi->cod, {input});
    return t;
}

kernel::Val elaborate_input(const Module& m, const std::string& text, const kernel::Val& type) {
    auto term = frontend::parse_term(text, m.sig.regime, {}, pretty::global_names(&m.sig));
    kernel::Checker checker(m.sig.regime, &m.sig);
    kernel::Ctx ctx;
    auto checked = checker.check(ctx, kernel::Fragment::Zero, term, type);
    return checker.evaluator().eval(checked.term, {});
}

kernel::Val family_input(kernel::Evaluator& ev, const Module& m, const std::optional<std::string>& generator,
                         std::uint64_t n) {
    auto numeral = ev.eval(kernel::nat_literal(m.sig.regime, n), {});
    if (!generator) return numeral;
    auto g = m.find(*generator);
    if (!g || !m.sig.entries[*g].ok) throw std::invalid_argument("unknown input family '" + *generator + "'");
    return ev.app(m.sig.entries[*g].value, numeral);
}

// ---------------------------------------------------------------- sweeps

namespace {

bool is_nat(const kernel::Val& t) { return kernel::as<vl::NatTy>(t) != nullptr; }

struct PreparedInput {
    compile::EncodedInput encoded;
    kernel::Val kernelInput;
};

bool agreement(kernel::Evaluator& ev, const Module& m, std::size_t index, std::size_t arity,
               const machine::Done* done, const kernel::Val& input) {
    if (!done) return false;
    const auto& e = m.sig.entries[index];
    if (arity == 0) return compile::agrees(ev, e.typeVal, done->value, e.value);
    return compile::agrees(ev, result_type(ev, m, index, input), done->value, ev.app(e.value, input));
}

}  // namespace

VerifyReport verify(const Module& m, std::size_t index, const SweepOptions& opts) {
    const auto program = compile_decl(m, index);
    VerifyReport report;
    report.name = m.sig.entries.at(index).name;
    report.regime = m.sig.regime;
    report.bound = program.potential.poly;

    const std::uint64_t count = program.inputArity == 0 ? 1 : opts.maxN + 1;
    kernel::Evaluator ev(m.sig.regime, &m.sig);

    // Inputs and expected results come from the single-threaded evaluator.
    std::vector<PreparedInput> inputs(count);
    const bool natFastPath = program.inputArity == 1 && !opts.family && is_nat(domain_type(m, index));
    if (program.inputArity == 1 && (!natFastPath || opts.checkAgreement)) {
        for (std::uint64_t n = 0; n < count; ++n) {
            inputs[n].kernelInput = family_input(ev, m, opts.family, n);
            if (!natFastPath)
                inputs[n].encoded = compile::encode_value(ev, domain_type(m, index), inputs[n].kernelInput, program.kind);
        }
    }

    std::vector<compile::RunResult> results(count);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        compile::RunOptions ro;
        ro.fuel = opts.fuel;
        for (std::uint64_t n = next++; n < count; n = next++) {
            if (program.inputArity == 0) results[n] = compile::run_and_verify(program, compile::EncodedInput{}, ro);
            else if (natFastPath) results[n] = compile::run_and_verify(program, n, ro);
            else results[n] = compile::run_and_verify(program, inputs[n].encoded, ro);
        }
    };
    unsigned jobs = opts.jobs ? opts.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::uint64_t>(jobs, count));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (std::uint64_t n = 0; n < count; ++n) {
        const auto& r = results[n];
        VerifyRow row;
        row.n = n;
        row.steps = r.steps;
        row.bound = r.bound;
        row.ok = r.ok;
        const auto* done = std::get_if<machine::Done>(&r.outcome);
        row.finished = done != nullptr;
        if (opts.checkAgreement) {
            try {
                row.agrees = agreement(ev, m, index, program.inputArity, done, inputs[n].kernelInput);
            } catch (const machine::DecodeError&) {
                row.agrees.reset();  // higher-order result
            }
        }
        report.ok = report.ok && row.ok;
        report.rows.push_back(row);
    }
    return report;
}

json to_json(const VerifyReport& r) {
    json j;
    j["name"] = r.name;
    j["regime"] = kernel::to_string(r.regime);
    j["bound"] = r.bound.coeffs();
    json rows = json::array();
    for (const auto& row : r.rows) {
        json jr;
        jr["n"] = row.n;
        jr["steps"] = row.steps;
        jr["bound"] = row.bound;
        jr["ok"] = row.ok;
        rows.push_back(std::move(jr));
    }
    j["rows"] = std::move(rows);
    j["ok"] = r.ok;
    return j;
}

json bound_json(const std::string& name, const compile::BoundReport& b) {
    json j;
    j["name"] = name;
    j["regime"] = kernel::to_string(b.regime);
    j["bound"] = b.q.coeffs();
    j["rows"] = json::array();
    j["ok"] = true;
    return j;
}

// ---------------------------------------------------------------- commands

namespace {

void report_diagnostics(const Module& m, std::ostream& err) {
    for (const auto& d : m.diagnostics) err << format(d, m.path) << "\n";
}

/// Loads, checks and locates a compilable declaration, or explains why not.
std::optional<std::size_t> runnable(const Module& m, const std::string& decl, std::ostream& err) {
    report_diagnostics(m, err);
    if (!m.parsed) return std::nullopt;
    auto idx = m.find(decl);
    if (!idx) {
        err << m.path << ": error: no declaration named '" << decl << "' [Scope]\n";
        return std::nullopt;
    }
    const auto& e = m.sig.entries[*idx];
    if (!e.ok) {
        err << m.path << ": error: declaration '" << decl << "' did not check\n";
        return std::nullopt;
    }
    if (e.sigma != kernel::Fragment::One) {
        err << m.path << ": error: declaration '" << decl << "' is erased (^0) and has no runtime code\n";
        return std::nullopt;
    }
    return idx;
}

bool write_json(const json& j, const std::optional<std::string>& path, std::ostream& out, std::ostream& err) {
    if (!path) return true;
    std::string text = j.dump(2) + "\n";
    if (*path == "-") {
        out << text;
        return true;
    }
    std::ofstream f(*path, std::ios::binary);
    if (!f) {
        err << "error: cannot write " << *path << "\n";
        return false;
    }
    f << text;
    return true;
}

machine::TraceSink trace_sink(std::ostream& err) {
    return [&err](machine::Rule r, std::uint64_t steps, std::size_t depth) {
        err << "trace " << steps << " " << machine::rule_name(r) << " env=" << depth << "\n";
    };
}

template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const DiagnosticError& e) {
        err << format(e.diagnostic()) << "\n";
        return kStaticFailure;
    } catch (const compile::EncodeError& e) {
        err << "error: " << e.what() << "\n";
        return kStaticFailure;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
}

std::string show_value(const Module& m, kernel::Evaluator& ev, const kernel::Val& type, const machine::ValuePtr& v) {
    kernel::TermPtr t;
    try {
        t = compile::decode_value(ev, type, v);
    } catch (const machine::DecodeError&) {
        return "<" + machine::to_string(*v) + ">";
    }
    pretty::Names names;
    names.globals = pretty::global_names(&m.sig);
    names.numerals = m.sig.regime;
    return pretty::term_to_string(t, names);
}

std::vector<std::string> collect_files(const std::vector<std::string>& paths) {
    std::vector<std::string> files;
    for (const auto& p : paths) {
        if (fs::is_directory(p)) {
            for (const auto& e : fs::recursive_directory_iterator(p))
                if (e.is_regular_file() && e.path().extension() == ".qtt") files.push_back(e.path().string());
        } else {
            files.push_back(p);
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace

int cmd_check(const std::string& file, const Options& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Module m = load_file(file, opts);
        report_diagnostics(m, err);
        if (!m.ok()) return int(kStaticFailure);
        out << file << ": ok (" << m.sig.entries.size() << " declarations, " << kernel::to_string(m.sig.regime)
            << ")\n";
        return int(kOk);
    });
}

int cmd_compile(const std::string& file, const std::string& decl, const Options& opts, std::ostream& out,
                std::ostream& err) {
    return guarded(err, [&] {
        Module m = load_file(file, opts);
        auto idx = runnable(m, decl, err);
        if (!idx) return int(kStaticFailure);
        auto p = compile_decl(m, *idx);
        out << machine::to_string(*p.code) << "\n";
        out << "potential: " << potentials::to_string(p.potential.poly) << "\n";
        return int(kOk);
    });
}

int cmd_run(const std::string& file, const std::string& decl, const std::string& input, const Options& opts,
            std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Module m = load_file(file, opts);
        auto idx = runnable(m, decl, err);
        if (!idx) return int(kStaticFailure);
        auto p = compile_decl(m, *idx);
        if (opts.emitMachine) out << "machine: " << machine::to_string(*p.code) << "\n";

        kernel::Evaluator ev(m.sig.regime, &m.sig);
        kernel::Val kernelInput;
        compile::EncodedInput encoded;
        if (p.inputArity == 1) {
            kernelInput = elaborate_input(m, input, domain_type(m, *idx));
            encoded = compile::encode_value(ev, domain_type(m, *idx), kernelInput, p.kind);
        }
        compile::RunOptions ro;
        ro.fuel = opts.fuel;
        if (opts.trace) ro.trace = trace_sink(err);
        auto r = compile::run_and_verify(p, encoded, ro);

        out << "steps: " << r.steps << "\n";
        out << "bound: " << r.bound << "\n";
        if (const auto* done = std::get_if<machine::Done>(&r.outcome)) {
            auto type = result_type(ev, m, *idx, kernelInput);
            out << "value: " << show_value(m, ev, type, done->value) << "\n";
            return int(r.ok ? kOk : kBoundViolation);
        }
        if (std::holds_alternative<machine::OutOfFuel>(r.outcome)) {
            err << "error: out of fuel after " << r.steps << " steps\n";
            return int(r.steps > r.bound ? kBoundViolation : kInternalError);
        }
        err << "internal error: machine stuck: " << std::get<machine::Stuck>(r.outcome).reason << "\n";
        return int(kInternalError);
    });
}

int cmd_bound(const std::string& file, const std::string& decl, const std::optional<std::string>& jsonPath,
              const Options& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Module m = load_file(file, opts);
        auto idx = runnable(m, decl, err);
        if (!idx) return int(kStaticFailure);
        auto p = compile_decl(m, *idx);
        auto b = compile::extract_bound(p);
        if (opts.emitMachine) out << "machine: " << machine::to_string(*p.code) << "\n";
        if (!jsonPath || *jsonPath != "-") {
            out << decl << ": " << b.description << "\n";
            out << "degree: " << b.q.degree() << "\n";
        }
        return int(write_json(bound_json(decl, b), jsonPath, out, err) ? kOk : kInternalError);
    });
}

namespace {

// A run past its bound is a violation even when fuel cut it short. A run
// stopped early within its bound (fuel or a stuck state) is an internal failure.
int sweep_exit_code(const VerifyReport& r) {
    bool unfinished = false;
    for (const auto& row : r.rows) {
        if (row.steps > row.bound) return kBoundViolation;
        unfinished = unfinished || !row.finished;
    }
    if (unfinished) return kInternalError;
    return r.ok ? kOk : kBoundViolation;
}

}  // namespace

int cmd_verify(const std::string& file, const std::string& decl, std::uint64_t maxN,
               const std::optional<std::string>& jsonPath, const std::optional<std::string>& family,
               const Options& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Module m = load_file(file, opts);
        auto idx = runnable(m, decl, err);
        if (!idx) return int(kStaticFailure);
        if (opts.emitMachine) out << "machine: " << machine::to_string(*compile_decl(m, *idx).code) << "\n";
        SweepOptions so;
        so.maxN = maxN;
        so.family = family ? family : m.family_for(decl);
        so.fuel = opts.fuel;
        so.jobs = opts.jobs;
        auto report = verify(m, *idx, so);
        if (!jsonPath || *jsonPath != "-") {
            std::uint64_t bad = 0;
            for (const auto& row : report.rows) {
                if (row.steps > row.bound) {
                    ++bad;
                    err << decl << ": n=" << row.n << " steps=" << row.steps << " exceeds bound " << row.bound << "\n";
                } else if (!row.finished) {
                    err << decl << ": n=" << row.n << " stopped after " << row.steps
                        << " steps without reaching a value (bound " << row.bound << ")\n";
                }
            }
            out << decl << ": " << report.rows.size() << " runs, " << bad << " violations, bound "
                << potentials::to_string(report.bound) << "\n";
        }
        if (!write_json(to_json(report), jsonPath, out, err)) return int(kInternalError);
        return sweep_exit_code(report);
    });
}

int cmd_corpus(const std::vector<std::string>& paths, std::uint64_t maxN, const std::optional<std::string>& jsonPath,
               const Options& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        int code = kOk;
        json all = json::array();
        for (const auto& file : collect_files(paths)) {
            Module m = load_file(file, opts);
            report_diagnostics(m, err);
            if (!m.ok()) {
                out << file << ": check failed\n";
                code = std::max(code, int(kStaticFailure));
                continue;
            }
            for (const auto& name : zeroing_failures(m)) {
                out << file << ": " << name << " does not re-check at ^0\n";
                code = std::max(code, int(kStaticFailure));
            }
            for (std::size_t i = 0; i < m.sig.entries.size(); ++i) {
                const auto& e = m.sig.entries[i];
                if (e.sigma != kernel::Fragment::One) continue;
                SweepOptions so;
                so.maxN = maxN;
                so.family = m.family_for(e.name);
                so.checkAgreement = true;
                so.fuel = opts.fuel;
                so.jobs = opts.jobs;
                if (kernel::as<vl::Pi>(e.typeVal) && !so.family &&
                    !kernel::as<vl::NatTy>(domain_type(m, i)))
                    continue;  // no canonical input family to sweep
                VerifyReport r = verify(m, i, so);
                std::uint64_t mismatches = 0;
                for (const auto& row : r.rows)
                    if (row.agrees == false) ++mismatches;
                out << file << ": " << e.name << " runs=" << r.rows.size() << " ok=" << (r.ok ? "yes" : "no")
                    << " mismatches=" << mismatches << "\n";
                code = std::max(code, sweep_exit_code(r));
                if (mismatches) code = std::max(code, int(kInternalError));
                json j = to_json(r);
                j["file"] = fs::path(file).filename().string();
                all.push_back(std::move(j));
            }
        }
        if (!write_json(all, jsonPath, out, err)) return int(kInternalError);
        return code;
    });
}

}  // namespace qtt::driver

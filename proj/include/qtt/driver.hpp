#pragma once
// Batch driver behind the qttc tool: loading and checking modules, running
// compiled declarations and sweeping them against their derived bounds.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qtt/compile.hpp"
#include "qtt/diagnostic.hpp"
#include "qtt/frontend.hpp"
#include "qtt/kernel.hpp"

namespace qtt::driver {

enum ExitCode : int { kOk = 0, kStaticFailure = 1, kBoundViolation = 2, kInternalError = 3 };

struct Options {
    std::optional<kernel::Regime> regime;
    std::optional<kernel::Fragment> sigma;
    std::optional<std::uint64_t> fuel;
    bool emitMachine = false;
    bool trace = false;
    unsigned jobs = 0;  // 0 picks the hardware concurrency
};

/// A parsed and checked module. Declarations that failed keep their slot in
/// the signature with `ok == false`.
struct Module {
    std::string path;
    kernel::Signature sig;
    std::vector<kernel::Declaration> decls;
    std::vector<std::string> pragmas;
    std::vector<Diagnostic> diagnostics;
    bool parsed = false;

    bool ok() const { return parsed && diagnostics.empty(); }
    std::optional<std::size_t> find(const std::string& name) const;
    bool sabotaged() const;
    /// Generator named by a `#family <decl> <generator>` pragma.
    std::optional<std::string> family_for(const std::string& decl) const;
};

Module load_text(const std::string& text, const std::string& path, const Options& opts = {});
/// Reads the file; an unreadable file yields a diagnostic with rule "IO".
Module load_file(const std::string& path, const Options& opts = {});

/// Re-checks every sigma=1 declaration of a checked module at sigma=0 against
/// a fresh copy of the signature. Returns the names that failed.
std::vector<std::string> zeroing_failures(const Module& m);

/// Compiles a checked declaration, applying the sabotage pragma when present.
compile::CompiledProgram compile_decl(const Module& m, std::size_t index);

/// Domain and codomain of a one-input declaration (codomain applied to `input`).
kernel::Val domain_type(const Module& m, std::size_t index);
kernel::Val result_type(kernel::Evaluator& ev, const Module& m, std::size_t index, const kernel::Val& input);

/// Parses `text` as a closed term, checks it at sigma=0 against `type` and evaluates it.
kernel::Val elaborate_input(const Module& m, const std::string& text, const kernel::Val& type);

/// Value of the declaration's input family at n: the generator applied to the
/// numeral n, or n itself when no generator is named.
kernel::Val family_input(kernel::Evaluator& ev, const Module& m, const std::optional<std::string>& generator,
                         std::uint64_t n);

struct VerifyRow {
    std::uint64_t n = 0;
    std::uint64_t steps = 0;
    std::uint64_t bound = 0;
    bool ok = false;
    bool finished = false;  // the machine reached a value
    std::optional<bool> agrees;  // set when agreement was requested
};

struct VerifyReport {
    std::string name;
    kernel::Regime regime = kernel::Regime::ConsFree;
    potentials::Polynomial bound;
    std::vector<VerifyRow> rows;
    bool ok = true;  // every row ok
};

struct SweepOptions {
    std::uint64_t maxN = 0;
    std::optional<std::string> family;
    bool checkAgreement = false;
    std::optional<std::uint64_t> fuel;
    unsigned jobs = 0;
};

/// Runs the declaration for every n in [0, maxN]. Inputs are built up front;
/// the machine runs are spread over worker threads and collected by n.
VerifyReport verify(const Module& m, std::size_t index, const SweepOptions& opts);

nlohmann::ordered_json to_json(const VerifyReport& r);
nlohmann::ordered_json bound_json(const std::string& name, const compile::BoundReport& b);

// ---------------------------------------------------------------- commands
// Each command writes its report to `out` and diagnostics to `err`, and
// returns one of the exit codes above.

int cmd_check(const std::string& file, const Options& opts, std::ostream& out, std::ostream& err);
int cmd_compile(const std::string& file, const std::string& decl, const Options& opts, std::ostream& out,
                std::ostream& err);
int cmd_run(const std::string& file, const std::string& decl, const std::string& input, const Options& opts,
            std::ostream& out, std::ostream& err);
int cmd_bound(const std::string& file, const std::string& decl, const std::optional<std::string>& jsonPath,
              const Options& opts, std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& file, const std::string& decl, std::uint64_t maxN,
               const std::optional<std::string>& jsonPath, const std::optional<std::string>& family,
               const Options& opts, std::ostream& out, std::ostream& err);
/// Checks every `.qtt` file under the given paths, re-checks sigma=1
/// declarations at sigma=0, and verifies each runnable declaration up to maxN
/// with compiler/kernel agreement.
int cmd_corpus(const std::vector<std::string>& paths, std::uint64_t maxN, const std::optional<std::string>& jsonPath,
               const Options& opts, std::ostream& out, std::ostream& err);

}  // namespace qtt::driver

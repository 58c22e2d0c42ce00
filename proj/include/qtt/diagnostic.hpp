#pragma once

#include <stdexcept>
#include <string>

namespace qtt {

/// 1-based source position range; line 0 means "no location known".
struct Span {
    int line = 0, col = 0, end_line = 0, end_col = 0;
    bool known() const { return line > 0; }
};

std::string to_string(const Span& s);

enum class Severity { Error, Warning, Note };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string message;
    Span span;
    std::string rule;
};

std::string format(const Diagnostic& d, const std::string& file = "");

/// Exception carrying a diagnostic through the frontend and kernel.
class DiagnosticError : public std::runtime_error {
public:
    explicit DiagnosticError(Diagnostic d) : std::runtime_error(d.message), diag_(std::move(d)) {}
    const Diagnostic& diagnostic() const { return diag_; }
    Diagnostic& diagnostic() { return diag_; }

private:
    Diagnostic diag_;
};

[[noreturn]] inline void fail(const std::string& rule, const std::string& message, Span span = {}) {
    throw DiagnosticError(Diagnostic{Severity::Error, message, span, rule});
}

}  // namespace qtt

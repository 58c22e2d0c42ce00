#include "qtt/diagnostic.hpp"

namespace qtt {

std::string to_string(const Span& s) {
    if (!s.known()) return "?";
    return std::to_string(s.line) + ":" + std::to_string(s.col) + "-" + std::to_string(s.end_line) + ":" +
           std::to_string(s.end_col);
}

std::string format(const Diagnostic& d, const std::string& file) {
    std::string out;
    if (!file.empty()) out += file + ":";
    if (d.span.known()) out += std::to_string(d.span.line) + ":" + std::to_string(d.span.col) + ": ";
    else if (!file.empty()) out += " ";
    switch (d.severity) {
        case Severity::Error: out += "error"; break;
        case Severity::Warning: out += "warning"; break;
        case Severity::Note: out += "note"; break;
    }
    if (!d.rule.empty()) out += " [" + d.rule + "]";
    out += ": " + d.message;
    return out;
}

}  // namespace qtt

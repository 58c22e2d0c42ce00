#pragma once
// Pretty printer for kernel syntax. Output re-parses to the same nameless term.

#include <optional>
#include <string>
#include <vector>

#include "qtt/nbe.hpp"
#include "qtt/syntax.hpp"

namespace qtt::pretty {

struct Names {
    std::vector<std::string> locals;   // outermost first; index 0 is locals.back()
    std::vector<std::string> globals;  // by signature index
    // When set, closed numerals of this regime's constructor flavour print as digits.
    std::optional<kernel::Regime> numerals;
};

std::string term_to_string(const kernel::TermPtr& t, const Names& names);
std::string type_to_string(const kernel::TypeExprPtr& t, const Names& names);

std::vector<std::string> global_names(const kernel::Signature* sig);

// Convenience overloads used by diagnostics.
std::string term_to_string(const kernel::TermPtr& t, const std::vector<std::string>& locals,
                           const kernel::Signature* sig);
std::string type_to_string(const kernel::TypeExprPtr& t, const std::vector<std::string>& locals,
                           const kernel::Signature* sig);

/// `def name ^s : T = M`
std::string declaration_to_string(const std::string& name, kernel::Fragment sigma, const kernel::TypeExprPtr& type,
                                  const kernel::TermPtr& body, const Names& globals);

bool is_keyword(const std::string& s);

}  // namespace qtt::pretty

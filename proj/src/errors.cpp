#include "prxml/errors.hpp"

#include <sstream>

namespace prxml {

static std::string span_prefix(const SourceSpan& s, const std::string& msg) {
  std::ostringstream os;
  os << "line " << s.line << ", col " << s.col << ": " << msg;
  return os.str();
}

SyntaxError::SyntaxError(const std::string& msg, SourceSpan s)
    : Error(span_prefix(s, msg)), span(s) {}

static std::string join_violations(const std::vector<Violation>& vs) {
  std::ostringstream os;
  os << "invalid document:";
  for (const auto& v : vs) os << "\n  " << violation_message(v);
  return os.str();
}

ValidationError::ValidationError(std::vector<Violation> vs)
    : Error(join_violations(vs)), violations(std::move(vs)) {}

InvalidDocumentError::InvalidDocumentError(std::vector<Violation> vs)
    : Error(join_violations(vs)), violations(std::move(vs)) {}

TooManyConfigurationsError::TooManyConfigurationsError(unsigned long long count_,
                                                       unsigned long long cap_)
    : Error("configuration space too large: " +
            (count_ == ~0ull ? std::string(">= 2^64") : std::to_string(count_)) +
            " configurations exceed cap " + std::to_string(cap_)),
      count(count_),
      cap(cap_) {}

TooManyMatchesError::TooManyMatchesError(unsigned long long cap_)
    : Error("more than " + std::to_string(cap_) + " candidate matches"), cap(cap_) {}

}  // namespace prxml

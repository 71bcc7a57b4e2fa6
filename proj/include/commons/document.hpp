#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "commons/grid.hpp"
#include "commons/guarantees.hpp"
#include "commons/rules.hpp"
#include "commons/verify.hpp"
#include "commons/welfare.hpp"

namespace commons {

/// Malformed problem document; the message names the line and field.
class DocumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NamedGuarantee {
  std::string name;
  Guarantee guarantee;
};

struct NamedRule {
  std::string name;
  SharingRule rule;
};

/// A parsed problem: the welfare function, its classification, the scan grid
/// and everything the document asks to build. See docs/document-format.md.
struct ProblemDocument {
  WelfareSpec spec;
  ModularityClass modularity;
  Grid grid;
  Tolerances tolerances;
  std::vector<NamedGuarantee> guarantees;
  std::vector<NamedRule> rules;

  const Guarantee& guarantee(const std::string& name) const;
  const SharingRule& rule(const std::string& name) const;
};

ProblemDocument parse_document(const std::string& text);
ProblemDocument load_document(const std::string& path);

/// `identity`, `exp`, `log`, or `[b0, b1, ...] / [[c...], ...]`; named forms
/// take `domain`.
Function1D parse_function(const std::string& text, TypeInterval domain);

}  // namespace commons

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "contactlax/compat.hpp"

namespace contactlax {

/// One line of a transcribed system, indexed by i (1..m) or j (1..n).
struct GoldenLine {
  std::string label;
  std::string kind;  // "printed" or "candidate"
  std::string index;
  std::string evolves;
  std::string expr;
};

struct Golden {
  std::string provenance;
  std::string note;
  std::vector<GoldenLine> lines;
};

Golden parse_golden(const std::string& json_text);
Golden load_golden(const std::string& path);
/// Golden file shipped with the sources ($CONTACTLAX_DATA_DIR overrides the
/// directory).
std::string default_golden_path();

/// Instantiates every golden line for the given (m, n); the first element of
/// each pair is the index value.
std::vector<std::pair<int, JetQuotient>> instantiate(const GoldenLine& line, int m, int n);

struct LineMatch {
  std::string label;
  std::string kind;
  int index_value = 0;
  JetVar evolves;
  /// Label of the derived equation carrying the same evolution jet.
  std::string matched;
  bool symbolic_match = false;
  int numeric_points = 0;
  int numeric_agree = 0;
  /// transcribed / c_printed - derived / c_derived, c the coefficient of the
  /// evolution jet.
  JetQuotient residual;
  /// Terms of the residual numerator after clearing denominators.
  std::vector<std::string> residual_terms;

  bool numeric_match() const { return numeric_points > 0 && numeric_agree == numeric_points; }
};

struct RlsReport {
  int m = 0;
  int n = 0;
  std::vector<LineMatch> lines;
  /// Derived equations no printed line evolves.
  std::vector<std::string> unmatched_derived;

  bool all_printed_match() const;
  /// Symbolic and numeric verdicts agree everywhere and every printed line
  /// found its derived partner.
  bool consistent() const;
  /// "pass", "mismatch-reported" or "fail".
  std::string verdict() const;
};

/// sys must be in residue form (one equation per pole residue).
RlsReport match_printed_rls(const PDESystem& sys, int m, int n, const Golden& golden, int points = 20,
                            std::uint64_t seed = 2024);

}  // namespace contactlax

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "conesemi/numerics.hpp"

namespace conesemi {

/// Holds and Fails are decided exactly or by a concrete witness. Inconclusive
/// means every sampled test passed, which is not a proof. Vacuous means a
/// theorem's hypothesis was found to fail, so its conclusion is not implied.
enum class Verdict { Holds, Fails, Inconclusive, Vacuous };

std::string_view to_string(Verdict v);

struct Witness {
  Vector point;
  Vector functional;  // empty when the check has no dual certificate
  double margin = 0.0;
  std::string label;
};

struct Report {
  std::string subject;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<Witness> witnesses;
  std::size_t samples_used = 0;
  double tolerance = 0.0;
  /// Extremal margin seen over all tests (closest approach to the tolerance).
  double worst_margin = 0.0;
  std::vector<std::string> notes;
  std::vector<Report> parts;

  bool failed() const { return verdict == Verdict::Fails; }
  /// Holds or sampled pass.
  bool passed() const { return verdict == Verdict::Holds || verdict == Verdict::Inconclusive; }
};

}  // namespace conesemi

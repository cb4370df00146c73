#include "conesemi/report.hpp"

namespace conesemi {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::Vacuous: return "vacuous";
  }
  return "unknown";
}

}  // namespace conesemi

#include "conesemi/run_report.hpp"

#include <cmath>
#include <sstream>

namespace conesemi {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string fmt(const Vector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v(i));
  return s + ")";
}

}  // namespace

json number_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vector_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number_json(v(i)));
  return a;
}

json report_to_json(const Report& r) {
  json j;
  j["subject"] = r.subject;
  j["verdict"] = std::string(to_string(r.verdict));
  j["sampled_pass_not_proof"] = r.verdict == Verdict::Inconclusive;
  j["samples_used"] = r.samples_used;
  j["tolerance"] = number_json(r.tolerance);
  j["worst_margin"] = number_json(r.worst_margin);
  j["notes"] = r.notes;
  json w = json::array();
  for (const auto& x : r.witnesses) {
    w.push_back({{"point", vector_json(x.point)},
                 {"functional", vector_json(x.functional)},
                 {"margin", number_json(x.margin)},
                 {"label", x.label}});
  }
  j["witnesses"] = w;
  json parts = json::array();
  for (const auto& p : r.parts) parts.push_back(report_to_json(p));
  j["parts"] = parts;
  return j;
}

std::string report_to_text(const Report& r, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  std::ostringstream os;
  os << pad << "[" << to_string(r.verdict) << "] " << r.subject;
  if (r.verdict == Verdict::Inconclusive) os << "  (sampled pass, not a proof)";
  os << "\n";
  if (r.samples_used > 0 || std::isfinite(r.worst_margin)) {
    os << pad << "  samples " << r.samples_used << ", worst margin " << fmt(r.worst_margin) << ", tolerance "
       << fmt(r.tolerance) << "\n";
  }
  for (const auto& n : r.notes) os << pad << "  note: " << n << "\n";
  for (const auto& w : r.witnesses) {
    os << pad << "  witness";
    if (!w.label.empty()) os << " [" << w.label << "]";
    os << ": x = " << fmt(w.point);
    if (w.functional.size() > 0) os << ", phi = " << fmt(w.functional);
    os << ", margin " << fmt(w.margin) << "\n";
  }
  for (const auto& p : r.parts) os << report_to_text(p, indent + 2);
  return os.str();
}

}  // namespace conesemi

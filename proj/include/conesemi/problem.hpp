#pragma once

// JSON problem files consumed by the command-line tool.

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "conesemi/semigroup.hpp"

namespace conesemi {

inline constexpr int kSchemaVersion = 1;

/// A problem-file error located by a JSON pointer (and line/column for syntax errors).
class ParseError : public std::runtime_error {
public:
  ParseError(std::string location, const std::string& message)
      : std::runtime_error(location + ": " + message), location_(std::move(location)) {}
  const std::string& location() const { return location_; }

private:
  std::string location_;
};

struct ConeSpec {
  std::optional<std::size_t> orthant;
  std::vector<Vector> generators;  // used when orthant is absent
};

struct NormFileSpec {
  NormKind kind = NormKind::WeightedLInf;
  std::optional<Vector> weights;
};

struct HalfNormFileSpec {
  std::string kind;  // canonical | regular_gauge | phi | order_unit | nplus | euclidean
  std::optional<NormFileSpec> norm;
  std::optional<Vector> phi;
  std::optional<Vector> unit;
};

struct OperatorSpec {
  Matrix matrix;
  std::optional<Domain> domain;
};

struct SemigroupFileSpec {
  std::vector<double> t_grid;
  std::optional<std::size_t> euler_steps;
  std::optional<SemigroupMethod> method;
  std::optional<double> lambda;
};

struct ProblemFile {
  int schema_version = kSchemaVersion;
  std::optional<ConeSpec> cone;
  std::optional<HalfNormFileSpec> halfnorm;
  std::optional<OperatorSpec> op;
  /// Either explicit functionals or the keyword "facets".
  std::optional<std::vector<Vector>> phi_set;
  bool phi_set_facets = false;
  std::optional<SemigroupFileSpec> semigroup;
  std::optional<Vector> unit;
  std::optional<Vector> phi;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
};

ProblemFile parse_problem(const nlohmann::json& j);
/// Reads and parses a file; syntax errors report line and column.
ProblemFile load_problem(const std::filesystem::path& path);
nlohmann::json to_json(const ProblemFile& p);

// Module inputs. Each throws ParseError naming the missing section, or a
// conesemi::Error from the module's own validation.
PolyCone build_cone(const ProblemFile& p);
HalfNorm build_halfnorm(const ProblemFile& p, const PolyCone& cone);
LinOp build_operator(const ProblemFile& p);
std::vector<DualVector> build_phi_set(const ProblemFile& p, const PolyCone& cone);
SemigroupConfig build_semigroup(const ProblemFile& p);
double build_lambda(const ProblemFile& p);

}  // namespace conesemi

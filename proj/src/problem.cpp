#include "conesemi/problem.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace conesemi {

using nlohmann::json;

namespace {

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ParseError(path.empty() ? "/" : path, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items()) {
    if (!ok.count(k)) throw ParseError(child(path, k), "unknown field");
  }
}

double read_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(path, "number is not finite");
  return v;
}

Vector read_vector(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ParseError(path, "expected a nonempty array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = read_number(j[i], child(path, i));
  return v;
}

std::vector<Vector> read_vectors(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ParseError(path, "expected a nonempty array of vectors");
  std::vector<Vector> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(read_vector(j[i], child(path, i)));
    if (out.back().size() != out.front().size()) throw ParseError(child(path, i), "length differs from the first entry");
  }
  return out;
}

Matrix read_matrix(const json& j, const std::string& path, std::optional<Eigen::Index> cols = std::nullopt) {
  if (!j.is_array()) throw ParseError(path, "expected an array of rows");
  if (j.empty()) return Matrix(0, cols.value_or(0));
  const auto rows = read_vectors(j, path);
  const auto c = rows.front().size();
  if (cols && c != *cols) throw ParseError(child(path, 0), "row length " + std::to_string(c) + " != " + std::to_string(*cols));
  Matrix m(static_cast<Eigen::Index>(rows.size()), c);
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return m;
}

std::size_t read_count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ParseError(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

json vec_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json mat_json(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i).transpose()));
  return a;
}

NormFileSpec read_norm(const json& j, const std::string& path) {
  only_keys(j, path, {"type", "weights"});
  NormFileSpec n;
  if (!j.contains("type") || !j["type"].is_string()) throw ParseError(child(path, "type"), "expected \"l1\" or \"linf\"");
  const auto t = j["type"].get<std::string>();
  if (t == "l1") {
    n.kind = NormKind::WeightedL1;
  } else if (t == "linf") {
    n.kind = NormKind::WeightedLInf;
  } else {
    throw ParseError(child(path, "type"), "expected \"l1\" or \"linf\"");
  }
  if (j.contains("weights")) n.weights = read_vector(j["weights"], child(path, "weights"));
  return n;
}

std::string method_string(SemigroupMethod m) {
  switch (m) {
    case SemigroupMethod::Euler: return "euler";
    case SemigroupMethod::Expm: return "expm";
    case SemigroupMethod::Both: return "both";
  }
  return "both";
}

const std::set<std::string> kHalfNormKinds{"canonical", "regular_gauge", "phi", "order_unit", "nplus", "euclidean"};

}  // namespace

ProblemFile parse_problem(const json& j) {
  only_keys(j, "", {"schema_version", "description", "cone", "halfnorm", "operator", "phi_set", "semigroup", "unit",
                    "phi", "seed", "samples"});
  ProblemFile p;
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer()) {
    throw ParseError("/schema_version", "required integer field is missing");
  }
  p.schema_version = j["schema_version"].get<int>();
  if (p.schema_version != kSchemaVersion) {
    throw ParseError("/schema_version", "unsupported version " + std::to_string(p.schema_version));
  }

  if (j.contains("cone")) {
    const auto& c = j["cone"];
    only_keys(c, "/cone", {"orthant", "generators"});
    ConeSpec cs;
    if (c.contains("orthant") == c.contains("generators")) {
      throw ParseError("/cone", "give exactly one of \"orthant\" or \"generators\"");
    }
    if (c.contains("orthant")) {
      cs.orthant = read_count(c["orthant"], "/cone/orthant");
      if (*cs.orthant == 0) throw ParseError("/cone/orthant", "dimension must be >= 1");
    } else {
      cs.generators = read_vectors(c["generators"], "/cone/generators");
    }
    p.cone = std::move(cs);
  }

  if (j.contains("halfnorm")) {
    const auto& h = j["halfnorm"];
    only_keys(h, "/halfnorm", {"kind", "norm", "phi", "unit"});
    HalfNormFileSpec hs;
    if (!h.contains("kind") || !h["kind"].is_string() || !kHalfNormKinds.count(h["kind"].get<std::string>())) {
      throw ParseError("/halfnorm/kind",
                       "expected one of canonical, regular_gauge, phi, order_unit, nplus, euclidean");
    }
    hs.kind = h["kind"].get<std::string>();
    if (h.contains("norm")) hs.norm = read_norm(h["norm"], "/halfnorm/norm");
    if (h.contains("phi")) hs.phi = read_vector(h["phi"], "/halfnorm/phi");
    if (h.contains("unit")) hs.unit = read_vector(h["unit"], "/halfnorm/unit");
    if ((hs.kind == "canonical" || hs.kind == "regular_gauge" || hs.kind == "nplus") && !hs.norm) {
      throw ParseError("/halfnorm/norm", "required for kind " + hs.kind);
    }
    if (hs.kind == "phi" && !hs.phi) throw ParseError("/halfnorm/phi", "required for kind phi");
    if (hs.kind == "order_unit" && !hs.unit) throw ParseError("/halfnorm/unit", "required for kind order_unit");
    p.halfnorm = std::move(hs);
  }

  if (j.contains("operator")) {
    const auto& o = j["operator"];
    only_keys(o, "/operator", {"matrix", "domain"});
    if (!o.contains("matrix")) throw ParseError("/operator/matrix", "required field is missing");
    OperatorSpec os;
    os.matrix = read_matrix(o["matrix"], "/operator/matrix");
    if (os.matrix.rows() == 0 || os.matrix.rows() != os.matrix.cols()) {
      throw ParseError("/operator/matrix", "matrix must be square and nonempty");
    }
    if (o.contains("domain")) {
      const auto& d = o["domain"];
      only_keys(d, "/operator/domain", {"ineq", "eq"});
      Domain dom{{Matrix(0, os.matrix.cols()), Vector(0)}, {Matrix(0, os.matrix.cols()), Vector(0)}};
      for (const char* key : {"ineq", "eq"}) {
        if (!d.contains(key)) continue;
        const std::string path = std::string("/operator/domain/") + key;
        only_keys(d[key], path, {"lhs", "rhs"});
        if (!d[key].contains("lhs") || !d[key].contains("rhs")) throw ParseError(path, "needs \"lhs\" and \"rhs\"");
        Matrix lhs = read_matrix(d[key]["lhs"], path + "/lhs", os.matrix.cols());
        Vector rhs = d[key]["rhs"].empty() ? Vector(0) : read_vector(d[key]["rhs"], path + "/rhs");
        if (rhs.size() != lhs.rows()) throw ParseError(path + "/rhs", "length differs from the number of rows");
        if (std::string(key) == "ineq") {
          dom.ineq = {std::move(lhs), std::move(rhs)};
        } else {
          dom.eq = {std::move(lhs), std::move(rhs)};
        }
      }
      os.domain = std::move(dom);
    }
    p.op = std::move(os);
  }

  if (j.contains("phi_set")) {
    const auto& s = j["phi_set"];
    if (s.is_string()) {
      if (s.get<std::string>() != "facets") throw ParseError("/phi_set", "expected \"facets\" or an array of vectors");
      p.phi_set_facets = true;
    } else {
      p.phi_set = read_vectors(s, "/phi_set");
    }
  }

  if (j.contains("semigroup")) {
    const auto& s = j["semigroup"];
    only_keys(s, "/semigroup", {"t_grid", "euler_steps", "method", "lambda"});
    SemigroupFileSpec ss;
    if (!s.contains("t_grid") || !s["t_grid"].is_array()) throw ParseError("/semigroup/t_grid", "expected an array");
    if (s["t_grid"].empty()) throw ParseError("/semigroup/t_grid", "t_grid is empty");
    for (std::size_t i = 0; i < s["t_grid"].size(); ++i) {
      const double t = read_number(s["t_grid"][i], child("/semigroup/t_grid", i));
      if (t < 0.0) throw ParseError(child("/semigroup/t_grid", i), "t must be >= 0");
      if (!ss.t_grid.empty() && t < ss.t_grid.back()) throw ParseError(child("/semigroup/t_grid", i), "t_grid must be sorted");
      ss.t_grid.push_back(t);
    }
    if (s.contains("euler_steps")) {
      ss.euler_steps = read_count(s["euler_steps"], "/semigroup/euler_steps");
      if (*ss.euler_steps == 0) throw ParseError("/semigroup/euler_steps", "must be >= 1");
    }
    if (s.contains("method")) {
      const auto& m = s["method"];
      const std::string v = m.is_string() ? m.get<std::string>() : "";
      if (v == "euler") {
        ss.method = SemigroupMethod::Euler;
      } else if (v == "expm") {
        ss.method = SemigroupMethod::Expm;
      } else if (v == "both") {
        ss.method = SemigroupMethod::Both;
      } else {
        throw ParseError("/semigroup/method", "expected euler, expm or both");
      }
    }
    if (s.contains("lambda")) {
      ss.lambda = read_number(s["lambda"], "/semigroup/lambda");
      if (*ss.lambda <= 0.0) throw ParseError("/semigroup/lambda", "must be > 0");
    }
    p.semigroup = std::move(ss);
  }

  if (j.contains("unit")) p.unit = read_vector(j["unit"], "/unit");
  if (j.contains("phi")) p.phi = read_vector(j["phi"], "/phi");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ParseError("/seed", "expected a nonnegative integer");
    p.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("samples")) p.samples = read_count(j["samples"], "/samples");
  return p;
}

ProblemFile load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    // nlohmann reports "... at line L, column C: ..."
    throw ParseError(path.string(), e.what());
  }
  return parse_problem(j);
}

json to_json(const ProblemFile& p) {
  json j;
  j["schema_version"] = p.schema_version;
  if (p.cone) {
    if (p.cone->orthant) {
      j["cone"]["orthant"] = *p.cone->orthant;
    } else {
      json g = json::array();
      for (const auto& v : p.cone->generators) g.push_back(vec_json(v));
      j["cone"]["generators"] = g;
    }
  }
  if (p.halfnorm) {
    json h;
    h["kind"] = p.halfnorm->kind;
    if (p.halfnorm->norm) {
      h["norm"]["type"] = p.halfnorm->norm->kind == NormKind::WeightedL1 ? "l1" : "linf";
      if (p.halfnorm->norm->weights) h["norm"]["weights"] = vec_json(*p.halfnorm->norm->weights);
    }
    if (p.halfnorm->phi) h["phi"] = vec_json(*p.halfnorm->phi);
    if (p.halfnorm->unit) h["unit"] = vec_json(*p.halfnorm->unit);
    j["halfnorm"] = h;
  }
  if (p.op) {
    j["operator"]["matrix"] = mat_json(p.op->matrix);
    if (p.op->domain) {
      if (p.op->domain->ineq.lhs.rows() > 0) {
        j["operator"]["domain"]["ineq"] = {{"lhs", mat_json(p.op->domain->ineq.lhs)}, {"rhs", vec_json(p.op->domain->ineq.rhs)}};
      }
      if (p.op->domain->eq.lhs.rows() > 0) {
        j["operator"]["domain"]["eq"] = {{"lhs", mat_json(p.op->domain->eq.lhs)}, {"rhs", vec_json(p.op->domain->eq.rhs)}};
      }
      if (!j["operator"].contains("domain")) j["operator"]["domain"] = json::object();
    }
  }
  if (p.phi_set_facets) {
    j["phi_set"] = "facets";
  } else if (p.phi_set) {
    json a = json::array();
    for (const auto& v : *p.phi_set) a.push_back(vec_json(v));
    j["phi_set"] = a;
  }
  if (p.semigroup) {
    json s;
    s["t_grid"] = p.semigroup->t_grid;
    if (p.semigroup->euler_steps) s["euler_steps"] = *p.semigroup->euler_steps;
    if (p.semigroup->method) s["method"] = method_string(*p.semigroup->method);
    if (p.semigroup->lambda) s["lambda"] = *p.semigroup->lambda;
    j["semigroup"] = s;
  }
  if (p.unit) j["unit"] = vec_json(*p.unit);
  if (p.phi) j["phi"] = vec_json(*p.phi);
  if (p.seed) j["seed"] = *p.seed;
  if (p.samples) j["samples"] = *p.samples;
  return j;
}

PolyCone build_cone(const ProblemFile& p) {
  if (!p.cone) throw ParseError("/cone", "this command needs a cone");
  if (p.cone->orthant) return PolyCone::orthant(*p.cone->orthant);
  return PolyCone::from_generators(p.cone->generators);
}

HalfNorm build_halfnorm(const ProblemFile& p, const PolyCone& cone) {
  if (!p.halfnorm) throw ParseError("/halfnorm", "this command needs a half-norm");
  const auto& h = *p.halfnorm;
  auto norm = [&]() {
    NormSpec n{h.norm->kind, h.norm->weights.value_or(Vector::Ones(static_cast<Eigen::Index>(cone.dim())))};
    return n;
  };
  if (h.kind == "canonical") return HalfNorm::canonical(cone, norm());
  if (h.kind == "regular_gauge") return HalfNorm::regular_gauge(cone, norm());
  if (h.kind == "phi") return HalfNorm::phi(cone, *h.phi);
  if (h.kind == "order_unit") return HalfNorm::order_unit(cone, *h.unit);
  if (h.kind == "nplus") return HalfNorm::positive_part_norm(cone, norm());
  return HalfNorm::euclidean(cone);
}

LinOp build_operator(const ProblemFile& p) {
  if (!p.op) throw ParseError("/operator", "this command needs an operator");
  if (p.op->domain) return LinOp(p.op->matrix, *p.op->domain);
  return LinOp(p.op->matrix);
}

std::vector<DualVector> build_phi_set(const ProblemFile& p, const PolyCone& cone) {
  std::vector<DualVector> out;
  if (p.phi_set_facets) {
    for (const auto& f : cone.facets()) out.push_back(DualVector::certify(cone, f));
    return out;
  }
  if (!p.phi_set) throw ParseError("/phi_set", "this command needs a functional set");
  for (std::size_t i = 0; i < p.phi_set->size(); ++i) {
    if (static_cast<std::size_t>((*p.phi_set)[i].size()) != cone.dim()) {
      throw ParseError(child("/phi_set", i), "length differs from the cone dimension");
    }
    out.push_back(DualVector::certify(cone, (*p.phi_set)[i]));
  }
  return out;
}

SemigroupConfig build_semigroup(const ProblemFile& p) {
  SemigroupConfig cfg;
  if (p.semigroup) {
    cfg.t_grid = p.semigroup->t_grid;
    if (p.semigroup->euler_steps) cfg.euler_steps = *p.semigroup->euler_steps;
    if (p.semigroup->method) cfg.method = *p.semigroup->method;
  }
  cfg.validate();
  return cfg;
}

double build_lambda(const ProblemFile& p) {
  return p.semigroup && p.semigroup->lambda ? *p.semigroup->lambda : 0.5;
}

}  // namespace conesemi

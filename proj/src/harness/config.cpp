#include "qpse/harness/config.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "qpse/errors.hpp"

namespace qpse::harness {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get(const json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

SpectralState parse_modes(const json& j, const ProjectionPtr& p, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + " must be a list of modes");
  std::vector<SpectralState::Mode> modes;
  for (const auto& m : j) {
    reject_unknown(m, {"k", "re", "im"}, where + "[]");
    modes.push_back({get<std::vector<int>>(m, "k", where), Complex(m.value("re", 0.0), m.value("im", 0.0))});
  }
  try {
    return SpectralState::from_modes(p, std::move(modes));
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

json modes_to_json(const SpectralState& u) {
  json out = json::array();
  for (std::size_t i = 0; i < u.size(); ++i) {
    out.push_back({{"k", std::vector<int>(u.index(i).begin(), u.index(i).end())},
                   {"re", u.value(i).real()},
                   {"im", u.value(i).imag()}});
  }
  return out;
}

Problem parse_inline(const json& j) {
  reject_unknown(j, {"projection", "potential", "initial", "kinetic_coefficient", "T", "id"}, "definition");
  const json& pj = j.at("projection");
  reject_unknown(pj, {"d", "n", "entries"}, "definition.projection");
  ProjectionPtr p;
  try {
    p = make_projection(get<std::size_t>(pj, "d", "projection"), get<std::size_t>(pj, "n", "projection"),
                        get<std::vector<double>>(pj, "entries", "projection"));
  } catch (const Error& e) {
    throw ConfigError(std::string("projection: ") + e.what());
  }
  const json& vj = j.at("potential");
  reject_unknown(vj, {"modes", "real"}, "definition.potential");
  SpectralState vm = parse_modes(vj.at("modes"), p, "potential.modes");
  std::optional<PotentialSpec> V;
  try {
    V = vj.contains("real") ? PotentialSpec(vm, vj.at("real").get<bool>()) : PotentialSpec::detect(vm);
  } catch (const Error& e) {
    throw ConfigError(std::string("potential: ") + e.what());
  }
  SpectralState u0 = parse_modes(j.at("initial"), p, "initial");
  Problem pr(j.value("id", std::string("inline")), "inline definition", p, std::move(*V), std::move(u0));
  pr.kinetic_coefficient = j.value("kinetic_coefficient", 1.0);
  pr.T = j.value("T", 1e-3);
  return pr;
}

torus::EmbedMode parse_embedding(const std::string& s) {
  if (s == "strict") return torus::EmbedMode::Strict;
  if (s == "truncate") return torus::EmbedMode::Truncate;
  if (s == "alias") return torus::EmbedMode::Alias;
  throw ConfigError("embedding must be strict, truncate or alias, got '" + s + "'");
}

std::string embedding_name(torus::EmbedMode m) {
  switch (m) {
    case torus::EmbedMode::Strict:
      return "strict";
    case torus::EmbedMode::Truncate:
      return "truncate";
    case torus::EmbedMode::Alias:
      return "alias";
  }
  return "alias";
}

}  // namespace

std::string to_string(Method m) { return m == Method::PM ? "pm" : "qsm"; }

Method parse_method(const std::string& s) {
  if (s == "pm" || s == "PM") return Method::PM;
  if (s == "qsm" || s == "QSM") return Method::QSM;
  throw ConfigError("method must be pm or qsm, got '" + s + "'");
}

ExperimentConfig parse_config(const json& j) {
  reject_unknown(j, {"problem", "definition", "study", "method", "N", "tau", "T", "taylor_order",
                     "kinetic_coefficient", "reference", "alignment", "embedding", "export", "seed"},
                 "config");
  ExperimentConfig cfg;
  if (j.contains("definition")) {
    cfg.inline_problem = parse_inline(j.at("definition"));
    cfg.problem = "inline";
  } else if (j.contains("problem")) {
    cfg.problem = get<std::string>(j, "problem", "config");
    find_problem(cfg.problem);
  }
  if (j.contains("study")) {
    const auto s = get<std::string>(j, "study", "config");
    if (s == "spatial") cfg.study = StudyKind::Spatial;
    else if (s == "temporal") cfg.study = StudyKind::Temporal;
    else if (s == "single") cfg.study = StudyKind::Single;
    else throw ConfigError("study must be spatial, temporal or single");
  }
  if (j.contains("method")) {
    cfg.methods.clear();
    const json& m = j.at("method");
    if (m.is_array()) {
      for (const auto& x : m) cfg.methods.push_back(parse_method(x.get<std::string>()));
    } else {
      cfg.methods.push_back(parse_method(m.get<std::string>()));
    }
  }
  auto number_list = [&](const char* key) {
    const json& v = j.at(key);
    return v.is_array() ? v : json::array({v});
  };
  if (j.contains("N")) cfg.N = number_list("N").get<std::vector<int>>();
  if (j.contains("tau")) cfg.tau = number_list("tau").get<std::vector<double>>();
  if (j.contains("T")) cfg.T = get<double>(j, "T", "config");
  cfg.taylor_order = j.value("taylor_order", 5);
  if (j.contains("kinetic_coefficient")) cfg.kinetic_coefficient = get<double>(j, "kinetic_coefficient", "config");
  if (j.contains("reference")) {
    const json& r = j.at("reference");
    reject_unknown(r, {"method", "N", "tau", "path", "allow_coarse"}, "reference");
    if (r.contains("path")) cfg.reference.path = get<std::string>(r, "path", "reference");
    if (r.contains("method")) cfg.reference.method = parse_method(get<std::string>(r, "method", "reference"));
    cfg.reference.N = r.value("N", 0);
    cfg.reference.tau = r.value("tau", 0.0);
    cfg.reference.allow_coarse = r.value("allow_coarse", false);
  }
  if (j.contains("alignment")) {
    const auto a = get<std::string>(j, "alignment", "config");
    if (a == "aliased") cfg.alignment = ErrorAlignment::Aliased;
    else if (a == "union") cfg.alignment = ErrorAlignment::Union;
    else throw ConfigError("alignment must be aliased or union");
  }
  if (j.contains("embedding")) cfg.embedding = parse_embedding(get<std::string>(j, "embedding", "config"));
  if (j.contains("export")) {
    const json& e = j.at("export");
    reject_unknown(e, {"density", "diffraction"}, "export");
    if (e.contains("density")) {
      const json& d = e.at("density");
      reject_unknown(d, {"box", "resolution"}, "export.density");
      DensityRequest req;
      req.box = get<std::vector<std::pair<double, double>>>(d, "box", "export.density");
      req.resolution = get<std::vector<int>>(d, "resolution", "export.density");
      cfg.density = req;
    }
    if (e.contains("diffraction")) {
      const json& d = e.at("diffraction");
      reject_unknown(d, {"threshold"}, "export.diffraction");
      cfg.diffraction = DiffractionRequest{get<double>(d, "threshold", "export.diffraction")};
    }
  }
  cfg.seed = j.value("seed", std::uint64_t{0});
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& cfg) {
  json j;
  if (cfg.inline_problem) {
    const Problem& p = *cfg.inline_problem;
    j["definition"] = {{"id", p.id},
                       {"projection", {{"d", p.projection->d()}, {"n", p.projection->n()}, {"entries", p.projection->entries()}}},
                       {"potential", {{"modes", modes_to_json(p.potential.modes())}, {"real", p.potential.is_real()}}},
                       {"initial", modes_to_json(p.initial)},
                       {"kinetic_coefficient", p.kinetic_coefficient},
                       {"T", p.T}};
  } else {
    j["problem"] = cfg.problem;
  }
  j["study"] = cfg.study == StudyKind::Spatial ? "spatial" : cfg.study == StudyKind::Temporal ? "temporal" : "single";
  json methods = json::array();
  for (auto m : cfg.methods) methods.push_back(to_string(m));
  j["method"] = methods;
  j["N"] = cfg.N;
  j["tau"] = cfg.tau;
  if (cfg.T) j["T"] = *cfg.T;
  j["taylor_order"] = cfg.taylor_order;
  if (cfg.kinetic_coefficient) j["kinetic_coefficient"] = *cfg.kinetic_coefficient;
  json r = {{"method", to_string(cfg.reference.method)},
            {"N", cfg.reference.N},
            {"tau", cfg.reference.tau},
            {"allow_coarse", cfg.reference.allow_coarse}};
  if (cfg.reference.path) r["path"] = cfg.reference.path->string();
  j["reference"] = r;
  j["alignment"] = cfg.alignment == ErrorAlignment::Aliased ? "aliased" : "union";
  j["embedding"] = embedding_name(cfg.embedding);
  if (cfg.density || cfg.diffraction) {
    json e = json::object();
    if (cfg.density) e["density"] = {{"box", cfg.density->box}, {"resolution", cfg.density->resolution}};
    if (cfg.diffraction) e["diffraction"] = {{"threshold", cfg.diffraction->threshold}};
    j["export"] = e;
  }
  j["seed"] = cfg.seed;
  return j;
}

Problem resolve_problem(const ExperimentConfig& cfg) {
  Problem p = cfg.inline_problem ? *cfg.inline_problem : find_problem(cfg.problem);
  if (cfg.T) p.T = *cfg.T;
  if (cfg.kinetic_coefficient) p.kinetic_coefficient = *cfg.kinetic_coefficient;
  return p;
}

std::size_t step_count(double T, double tau) {
  if (!(tau != 0.0) || !std::isfinite(tau) || !std::isfinite(T)) throw ConfigError("need finite T and nonzero tau");
  const double ratio = T / tau;
  const double M = std::round(ratio);
  if (M < 1.0 || std::abs(ratio - M) > 1e-9 * M) {
    std::ostringstream msg;
    msg << "T = " << T << " is not an integer multiple of tau = " << tau;
    throw ConfigError(msg.str());
  }
  return static_cast<std::size_t>(M);
}

void validate_config(const ExperimentConfig& cfg) {
  const Problem p = resolve_problem(cfg);
  if (cfg.N.empty()) throw ConfigError("N list is empty");
  if (cfg.tau.empty()) throw ConfigError("tau list is empty");
  if (cfg.methods.empty()) throw ConfigError("method list is empty");
  for (int N : cfg.N) {
    if (N < 1) throw ConfigError("N must be positive");
  }
  for (double t : cfg.tau) step_count(p.T, t);
  if (cfg.taylor_order < 0) throw ConfigError("taylor_order must be non-negative");
  if (cfg.study == StudyKind::Spatial && cfg.tau.size() != 1) {
    throw ConfigError("a spatial study uses a single tau");
  }
  if (cfg.study == StudyKind::Temporal && cfg.N.size() != 1) {
    throw ConfigError("a temporal study uses a single N");
  }
  if (cfg.study == StudyKind::Single) return;
  const ReferenceSpec& r = cfg.reference;
  if (r.path) return;
  if (r.N < 1 || !(r.tau > 0.0)) throw ConfigError("reference needs N >= 1 and tau > 0, or a path");
  step_count(p.T, r.tau);
  if (!r.allow_coarse) {
    int maxN = 0;
    for (int N : cfg.N) maxN = std::max(maxN, N);
    double min_tau = cfg.tau.front();
    for (double t : cfg.tau) min_tau = std::min(min_tau, t);
    if (r.N < maxN) throw ConfigError("reference N must be at least the largest N in the study");
    if (r.tau > min_tau / 10 * (1 + 1e-12)) {
      throw ConfigError("reference tau must be at most a tenth of the smallest tau (set reference.allow_coarse to override)");
    }
  }
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string problem_fingerprint(const Problem& p) {
  std::string bytes;
  auto put = [&](const void* data, std::size_t size) { bytes.append(static_cast<const char*>(data), size); };
  auto put_state = [&](const SpectralState& u) {
    const std::uint64_t count = u.size();
    put(&count, sizeof count);
    for (std::size_t i = 0; i < u.size(); ++i) {
      put(u.index(i).data(), u.index(i).size() * sizeof(int));
      put(&u.value(i), sizeof(Complex));
    }
  };
  const std::uint64_t dims[] = {p.projection->d(), p.projection->n()};
  put(dims, sizeof dims);
  put(p.projection->entries().data(), p.projection->entries().size() * sizeof(double));
  put_state(p.potential.modes());
  put_state(p.initial);
  put(&p.kinetic_coefficient, sizeof(double));
  put(&p.T, sizeof(double));
  return fnv1a_hex(bytes);
}

}  // namespace qpse::harness

#pragma once

// INI-style run configuration.
//
//   [experiment]  id, p, n | n1 n2, m | m1 m2, reps, seed, theory_overlay
//   [covariance]  kind = identity | equal_corr | ar1 | diagonal, rho, sigmas
//   [scenario]    kind = delocalized | localized | flat, n0, redraw_mu2, delta2
//   [innovation]  kind = normal | t | gamma, df, gamma_sign
//                 (kind1/kind2, df1/df2 override per population)
//   [classifiers] list = d, t, nb, oracle
//   [output]      directory, formats = csv, json
//
// Only [experiment] p, n (or n1/n2) and seed are required.

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hdc/errors.hpp"
#include "hdc/format.hpp"
#include "hdc/harness.hpp"

namespace hdc {

struct OutputSpec {
  std::string directory;  // empty: use the default output directory
  std::vector<std::string> formats{"csv", "json"};

  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct RunConfig {
  ExperimentConfig experiment;
  OutputSpec output;
};

namespace detail {

namespace pt = boost::property_tree;

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s + ",") {
    if (ch == ',' || ch == ' ' || ch == '\t' || ch == ';') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  return out;
}

// Typed, key-path-aware access to one INI section.
class Section {
public:
  Section(std::string name, const pt::ptree* tree) : name_(std::move(name)), tree_(tree) {}

  std::string path(const std::string& key) const { return "[" + name_ + "]." + key; }

  bool has(const std::string& key) const { return tree_ && tree_->find(key) != tree_->not_found(); }

  std::optional<std::string> text(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return std::string(trim(tree_->get<std::string>(key)));
  }

  std::string required_text(const std::string& key) const {
    auto v = text(key);
    if (!v) throw ValidationError("missing required key " + path(key));
    return *v;
  }

  std::optional<double> real(const std::string& key) const {
    const auto t = text(key);
    if (!t) return std::nullopt;
    const auto v = parse_number(*t);
    if (!v || !std::isfinite(*v)) throw ValidationError(path(key) + ": '" + *t + "' is not a number");
    return v;
  }

  std::optional<long long> integer(const std::string& key) const {
    const auto t = text(key);
    if (!t) return std::nullopt;
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t->data(), t->data() + t->size(), v);
    if (ec != std::errc() || ptr != t->data() + t->size())
      throw ValidationError(path(key) + ": '" + *t + "' is not an integer");
    return v;
  }

  std::optional<int> bounded_int(const std::string& key, long long lo, long long hi = 100000000) const {
    const auto v = integer(key);
    if (!v) return std::nullopt;
    if (*v < lo || *v > hi)
      throw ValidationError(path(key) + " = " + std::to_string(*v) + " is out of range [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]");
    return static_cast<int>(*v);
  }

  std::optional<bool> boolean(const std::string& key) const {
    const auto t = text(key);
    if (!t) return std::nullopt;
    const auto s = lower(*t);
    if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
    if (s == "false" || s == "no" || s == "0" || s == "off") return false;
    throw ValidationError(path(key) + ": '" + *t + "' is not a boolean");
  }

  void allow_only(const std::set<std::string>& keys) const {
    if (!tree_) return;
    for (const auto& [k, v] : *tree_) {
      if (!keys.count(k)) throw ValidationError("unknown key " + path(k));
      if (!v.empty()) throw ValidationError("nested value under " + path(k));
    }
  }

private:
  std::string name_;
  const pt::ptree* tree_;
};

inline InnovationSpec parse_innovation(const std::string& kind, const Section& s, const std::string& kind_key,
                                       const std::string& df_key) {
  const auto k = lower(kind);
  if (k == "normal" || k == "gaussian" || k == "standard_normal") return InnovationSpec::standard_normal();
  if (k == "t" || k == "student_t") {
    const auto df = s.bounded_int(df_key, 5, 1000000);
    if (!df) throw ValidationError("missing required key " + s.path(df_key) + " for Student t innovations");
    return InnovationSpec::student_t(*df);
  }
  if (k == "gamma") {
    const double sign = s.real("gamma_sign").value_or(1.0);
    if (sign != 1.0 && sign != -1.0) throw ValidationError(s.path("gamma_sign") + " must be 1 or -1");
    return InnovationSpec::gamma_shifted(sign);
  }
  throw ValidationError(s.path(kind_key) + ": unknown innovation kind '" + kind + "' (expected normal, t or gamma)");
}

}  // namespace detail

/// Parses INI text into a validated run configuration. Error messages name
/// the offending key as [section].key.
inline RunConfig parse_config_text(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree root;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(std::string("config syntax error: ") + e.what());
  }
  const std::set<std::string> sections{"experiment", "covariance", "scenario", "innovation", "classifiers", "output"};
  for (const auto& [k, v] : root) {
    if (!sections.count(k)) throw ValidationError("unknown section [" + k + "]");
    if (v.empty() && !v.data().empty()) throw ValidationError("key '" + k + "' is outside any section");
  }
  auto section = [&](const std::string& name) {
    const auto it = root.find(name);
    return detail::Section(name, it == root.not_found() ? nullptr : &it->second);
  };

  RunConfig rc;
  ExperimentConfig& c = rc.experiment;

  const auto ex = section("experiment");
  ex.allow_only({"id", "p", "n", "n1", "n2", "m", "m1", "m2", "reps", "seed", "theory_overlay"});
  c.id = ex.text("id").value_or("experiment");
  const auto p = ex.bounded_int("p", 1);
  if (!p) throw ValidationError("missing required key " + ex.path("p"));
  c.p = *p;
  const auto n = ex.bounded_int("n", 2);
  const auto n1 = ex.bounded_int("n1", 2);
  const auto n2 = ex.bounded_int("n2", 2);
  if (n && (n1 || n2)) throw ValidationError(ex.path("n") + " cannot be combined with n1/n2");
  if (!n && !(n1 && n2)) throw ValidationError("missing required key " + ex.path(n1 ? "n2" : "n1") + " (or n)");
  c.n1 = n ? *n : *n1;
  c.n2 = n ? *n : *n2;
  const auto m = ex.bounded_int("m", 2);
  const auto m1 = ex.bounded_int("m1", 2);
  const auto m2 = ex.bounded_int("m2", 2);
  if (m && (m1 || m2)) throw ValidationError(ex.path("m") + " cannot be combined with m1/m2");
  c.m1 = m ? *m : m1.value_or(c.n1);
  c.m2 = m ? *m : m2.value_or(c.n2);
  c.reps = ex.bounded_int("reps", 1).value_or(1000);
  const auto seed_text = ex.text("seed");
  if (!seed_text) throw ValidationError("missing required key " + ex.path("seed"));
  {
    std::uint64_t seed = 0;
    const auto [ptr, ec] = std::from_chars(seed_text->data(), seed_text->data() + seed_text->size(), seed);
    if (ec != std::errc() || ptr != seed_text->data() + seed_text->size())
      throw ValidationError(ex.path("seed") + ": '" + *seed_text + "' is not an unsigned 64-bit integer");
    c.master_seed = seed;
  }
  c.theory_overlay = ex.boolean("theory_overlay").value_or(false);

  const auto cv = section("covariance");
  cv.allow_only({"kind", "rho", "sigmas"});
  const auto cov_kind = detail::lower(cv.text("kind").value_or("identity"));
  auto rho_for = [&](auto factory) {
    const auto rho = cv.real("rho");
    if (!rho) throw ValidationError("missing required key " + cv.path("rho") + " for kind = " + cov_kind);
    try {
      return factory(*rho);
    } catch (const DomainError& e) {
      throw ValidationError(cv.path("rho") + " is out of range: " + e.what());
    }
  };
  if (cov_kind != "diagonal" && cv.has("sigmas"))
    throw ValidationError(cv.path("sigmas") + " only applies to kind = diagonal");
  if ((cov_kind == "identity" || cov_kind == "diagonal") && cv.has("rho"))
    throw ValidationError(cv.path("rho") + " does not apply to kind = " + cov_kind);
  if (cov_kind == "identity") {
    c.covariance = CovarianceSpec::identity(c.p);
  } else if (cov_kind == "equal_corr" || cov_kind == "equal") {
    c.covariance = rho_for([&](double r) { return CovarianceSpec::equal_corr(c.p, r); });
  } else if (cov_kind == "ar1") {
    c.covariance = rho_for([&](double r) { return CovarianceSpec::ar1(c.p, r); });
  } else if (cov_kind == "diagonal") {
    const auto list = detail::split_list(cv.required_text("sigmas"));
    Vector v(static_cast<Eigen::Index>(list.size()));
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto x = detail::parse_number(list[i]);
      if (!x || !(*x > 0.0) || !std::isfinite(*x))
        throw ValidationError(cv.path("sigmas") + ": entry " + std::to_string(i + 1) + " ('" + list[i] +
                              "') is not a positive number");
      v[static_cast<Eigen::Index>(i)] = *x;
    }
    if (v.size() != c.p)
      throw ValidationError(cv.path("sigmas") + " has " + std::to_string(v.size()) + " entries but p = " +
                            std::to_string(c.p));
    c.covariance = CovarianceSpec::diagonal(v);
  } else {
    throw ValidationError(cv.path("kind") + ": unknown covariance kind '" + cov_kind +
                          "' (expected identity, equal_corr, ar1 or diagonal)");
  }

  const auto sc = section("scenario");
  sc.allow_only({"kind", "n0", "redraw_mu2", "delta2"});
  const auto sc_kind = detail::lower(sc.text("kind").value_or("delocalized"));
  if (sc_kind == "delocalized") c.scenario.kind = ScenarioSpec::Kind::Delocalized;
  else if (sc_kind == "localized") c.scenario.kind = ScenarioSpec::Kind::Localized;
  else if (sc_kind == "flat") c.scenario.kind = ScenarioSpec::Kind::Flat;
  else
    throw ValidationError(sc.path("kind") + ": unknown scenario kind '" + sc_kind +
                          "' (expected delocalized, localized or flat)");
  if (c.scenario.kind == ScenarioSpec::Kind::Flat) {
    if (sc.has("n0")) throw ValidationError(sc.path("n0") + " does not apply to kind = flat");
    const auto d2 = sc.real("delta2");
    if (!d2) throw ValidationError("missing required key " + sc.path("delta2") + " for kind = flat");
    if (!(*d2 >= 0.0)) throw ValidationError(sc.path("delta2") + " must be >= 0");
    c.scenario.n0 = 1;
    c.scenario.delta2 = *d2;
    c.scenario.redraw_mu2 = false;
    if (sc.has("redraw_mu2")) throw ValidationError(sc.path("redraw_mu2") + " does not apply to kind = flat");
  } else {
    if (sc.has("delta2")) throw ValidationError(sc.path("delta2") + " only applies to kind = flat");
    c.scenario.n0 = sc.bounded_int("n0", 1, c.p).value_or(std::min(10, c.p));
    c.scenario.redraw_mu2 = sc.boolean("redraw_mu2").value_or(true);
  }

  const auto in = section("innovation");
  in.allow_only({"kind", "df", "gamma_sign", "kind1", "kind2", "df1", "df2"});
  const auto base_kind = in.text("kind").value_or("normal");
  c.innovation1 = detail::parse_innovation(in.text("kind1").value_or(base_kind), in, in.has("kind1") ? "kind1" : "kind",
                                           in.has("df1") ? "df1" : "df");
  c.innovation2 = detail::parse_innovation(in.text("kind2").value_or(base_kind), in, in.has("kind2") ? "kind2" : "kind",
                                           in.has("df2") ? "df2" : "df");

  const auto cl = section("classifiers");
  cl.allow_only({"list"});
  c.classifiers.clear();
  if (const auto list = cl.text("list")) {
    for (const auto& name : detail::split_list(*list)) {
      try {
        c.classifiers.push_back(parse_classifier(name));
      } catch (const ValidationError& e) {
        throw ValidationError(cl.path("list") + ": " + e.what());
      }
    }
    if (c.classifiers.empty()) throw ValidationError(cl.path("list") + " is empty");
  } else {
    if (c.p < c.n1 + c.n2 - 2) c.classifiers.push_back(ClassifierId::D);
    c.classifiers.insert(c.classifiers.end(), {ClassifierId::T, ClassifierId::NB, ClassifierId::Oracle});
  }

  const auto out = section("output");
  out.allow_only({"directory", "formats"});
  rc.output.directory = out.text("directory").value_or("");
  if (const auto f = out.text("formats")) {
    rc.output.formats = detail::split_list(detail::lower(*f));
    for (const auto& fmt : rc.output.formats)
      if (fmt != "csv" && fmt != "json")
        throw ValidationError(out.path("formats") + ": unknown format '" + fmt + "' (expected csv, json)");
    if (rc.output.formats.empty()) throw ValidationError(out.path("formats") + " is empty");
  }

  if (c.scenario.kind == ScenarioSpec::Kind::Delocalized) {
    try {
      beta_squared(c.covariance);
    } catch (const Error& e) {
      throw ValidationError(sc.path("kind") + ": " + e.what());
    }
  }
  validate(c);
  return rc;
}

inline RunConfig parse_run_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

inline ExperimentConfig parse_config(const std::string& path) { return parse_run_file(path).experiment; }

namespace detail {

inline std::string classifier_key(ClassifierId id) {
  switch (id) {
    case ClassifierId::D: return "d";
    case ClassifierId::T: return "t";
    case ClassifierId::NB: return "nb";
    default: return "oracle";
  }
}

inline void write_innovation(std::ostream& os, const InnovationSpec& s, const std::string& suffix) {
  if (s.kind() == InnovationSpec::Kind::StandardNormal) {
    os << "kind" << suffix << " = normal\n";
  } else if (s.kind() == InnovationSpec::Kind::StudentT) {
    os << "kind" << suffix << " = t\n" << "df" << suffix << " = " << s.degrees_of_freedom() << "\n";
  } else {
    os << "kind" << suffix << " = gamma\n";
  }
}

}  // namespace detail

/// Serializes a configuration back to INI text; parse_config_text of the
/// result yields an equal configuration.
inline std::string to_config_string(const RunConfig& rc) {
  const ExperimentConfig& c = rc.experiment;
  std::ostringstream os;
  os << "[experiment]\n"
     << "id = " << c.id << "\n"
     << "p = " << c.p << "\n"
     << "n1 = " << c.n1 << "\n"
     << "n2 = " << c.n2 << "\n"
     << "m1 = " << c.m1 << "\n"
     << "m2 = " << c.m2 << "\n"
     << "reps = " << c.reps << "\n"
     << "seed = " << c.master_seed << "\n"
     << "theory_overlay = " << (c.theory_overlay ? "true" : "false") << "\n\n";

  os << "[covariance]\n";
  const auto& k = c.covariance.kind();
  if (std::holds_alternative<cov::Identity>(k)) {
    os << "kind = identity\n";
  } else if (const auto* e = std::get_if<cov::EqualCorr>(&k)) {
    os << "kind = equal_corr\nrho = " << format_double(e->rho) << "\n";
  } else if (const auto* a = std::get_if<cov::AR1>(&k)) {
    os << "kind = ar1\nrho = " << format_double(a->rho) << "\n";
  } else if (const auto* d = std::get_if<cov::Diagonal>(&k)) {
    os << "kind = diagonal\nsigmas = ";
    for (Eigen::Index i = 0; i < d->variances.size(); ++i) os << (i ? ", " : "") << format_double(d->variances[i]);
    os << "\n";
  } else {
    throw UnsupportedError("explicit covariance matrices cannot be written to a config file");
  }

  os << "\n[scenario]\nkind = " << to_string(c.scenario.kind) << "\n";
  if (c.scenario.kind == ScenarioSpec::Kind::Flat) {
    os << "delta2 = " << format_double(c.scenario.delta2) << "\n";
  } else {
    os << "n0 = " << c.scenario.n0 << "\nredraw_mu2 = " << (c.scenario.redraw_mu2 ? "true" : "false") << "\n";
  }

  os << "\n[innovation]\n";
  detail::write_innovation(os, c.innovation1, "1");
  detail::write_innovation(os, c.innovation2, "2");
  for (const auto* s : {&c.innovation1, &c.innovation2}) {
    if (s->kind() == InnovationSpec::Kind::GammaShifted) {
      os << "gamma_sign = " << (s->theta() < 0 ? -1 : 1) << "\n";
      break;
    }
  }

  os << "\n[classifiers]\nlist = ";
  for (std::size_t i = 0; i < c.classifiers.size(); ++i)
    os << (i ? ", " : "") << detail::classifier_key(c.classifiers[i]);
  os << "\n\n[output]\n";
  if (!rc.output.directory.empty()) os << "directory = " << rc.output.directory << "\n";
  os << "formats = ";
  for (std::size_t i = 0; i < rc.output.formats.size(); ++i) os << (i ? ", " : "") << rc.output.formats[i];
  os << "\n";
  return os.str();
}

}  // namespace hdc

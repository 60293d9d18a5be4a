#pragma once

// JSON forms of certificates (versioned, round-trippable) and of the reports
// printed by the command-line tool.

#include <string>

#include "json.hpp"

#include "balans/analysis.hpp"
#include "balans/balance.hpp"
#include "balans/dendric.hpp"

namespace balans {

using Json = nlohmann::ordered_json;

inline PisotClass pisot_class(const std::string& s) {
  for (auto c : {PisotClass::Pisot, PisotClass::SecondEigenvalueOutside, PisotClass::UnitModulusNonRootOfUnity,
                 PisotClass::RootOfUnityPresent})
    if (s == to_string(c)) return c;
  throw Error("unknown classification '" + s + "'");
}

namespace detail {

inline Json big(const BigInt& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
    return x.convert_to<std::int64_t>();
  return x.str();
}

inline BigInt big_from(const Json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) return BigInt(j.get<std::string>());
  throw Error("expected an integer");
}

inline Json rational(const Rational& x) {
  return Json{{"p", big(boost::multiprecision::numerator(x))}, {"q", big(boost::multiprecision::denominator(x))}};
}

inline Json frequency(const Frequency& f) {
  Json j;
  j["exact"] = f.exact;
  if (f.exact) {
    j["p"] = big(boost::multiprecision::numerator(f.value));
    j["q"] = big(boost::multiprecision::denominator(f.value));
  }
  j["approx"] = f.approx;
  return j;
}

inline Json complex(const std::complex<double>& z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(std::string("certificate: missing field '") + key + "'");
  return j.at(key);
}

}  // namespace detail

inline Json to_json(const ImbalanceCertificate& c) {
  const Substitution s = Substitution::parse(c.substitution);
  const Alphabet& al = s.alphabet();
  Json j;
  j["version"] = c.version;
  j["substitution"] = c.substitution;
  j["pattern"] = al.format(c.pattern);
  j["frequency"] = Json{{"p", detail::big(c.p)}, {"q", detail::big(c.q)}};
  j["kind"] = to_string(c.kind);
  Json w = Json::object();
  switch (c.kind) {
    case CertificateKind::DivisibilityReturnWord:
      w["return_word"] = al.format(c.witness);
      break;
    case CertificateKind::DivisibilityBACBC:
      w["b"] = al.name(c.left);
      w["a"] = al.format(c.witness);
      w["c"] = al.name(c.right);
      break;
    case CertificateKind::PotentialInconsistency:
      break;
    case CertificateKind::SpectralNecessary:
      if (c.spectral) {
        w["scope"] = c.spectral->scope;
        w["classification"] = to_string(c.spectral->classification);
        w["eigenvalue"] = detail::complex(c.spectral->eigenvalue);
        w["modulus"] = Json::array({c.spectral->modulus_lo, c.spectral->modulus_hi});
      }
      break;
  }
  j["witness"] = w;
  j["level"] = c.level;
  if (c.modular) {
    const auto& m = *c.modular;
    j["modular"] = Json{{"modulus", m.modulus},   {"rho", m.rho},
                        {"pi", m.pi},             {"start", m.start},
                        {"residues", m.residues}, {"witness_level", m.witness_level},
                        {"witness_length", detail::big(m.witness_length)}};
  }
  if (c.cycle) {
    Json blocks = Json::array();
    for (const auto& b : c.cycle->blocks) blocks.push_back(al.format(b));
    j["cycle"] = Json{{"blocks", blocks}, {"qphi_sum", detail::big(c.cycle->qphi_sum)}};
  }
  return j;
}

inline ImbalanceCertificate certificate_from_json(const Json& j) {
  using detail::field;
  ImbalanceCertificate c;
  try {
    c.version = field(j, "version").get<int>();
    if (c.version != 1) throw Error("certificate: unsupported version " + std::to_string(c.version));
    c.substitution = field(j, "substitution").get<std::string>();
    const Substitution s = Substitution::parse(c.substitution);
    const Alphabet& al = s.alphabet();
    c.pattern = al.parse(field(j, "pattern").get<std::string>());
    const Json& f = field(j, "frequency");
    c.p = detail::big_from(field(f, "p"));
    c.q = detail::big_from(field(f, "q"));
    c.kind = certificate_kind(field(j, "kind").get<std::string>());
    c.level = field(j, "level").get<unsigned>();
    const Json& w = field(j, "witness");
    switch (c.kind) {
      case CertificateKind::DivisibilityReturnWord:
        c.witness = al.parse(field(w, "return_word").get<std::string>());
        break;
      case CertificateKind::DivisibilityBACBC:
        c.left = al.index(field(w, "b").get<std::string>());
        c.witness = al.parse(field(w, "a").get<std::string>());
        c.right = al.index(field(w, "c").get<std::string>());
        break;
      case CertificateKind::PotentialInconsistency:
        break;
      case CertificateKind::SpectralNecessary: {
        SpectralData sd;
        sd.scope = field(w, "scope").get<std::string>();
        sd.classification = pisot_class(field(w, "classification").get<std::string>());
        const Json& z = field(w, "eigenvalue");
        sd.eigenvalue = {field(z, "re").get<double>(), field(z, "im").get<double>()};
        const Json& m = field(w, "modulus");
        if (!m.is_array() || m.size() != 2) throw Error("certificate: modulus must be [lo, hi]");
        sd.modulus_lo = m[0].get<double>();
        sd.modulus_hi = m[1].get<double>();
        c.spectral = sd;
        break;
      }
    }
    if (j.contains("modular")) {
      const Json& m = j.at("modular");
      ModularData md;
      md.modulus = field(m, "modulus").get<std::uint64_t>();
      md.rho = field(m, "rho").get<std::size_t>();
      md.pi = field(m, "pi").get<std::size_t>();
      md.start = field(m, "start").get<std::size_t>();
      md.residues = field(m, "residues").get<std::vector<std::uint64_t>>();
      md.witness_level = field(m, "witness_level").get<unsigned>();
      md.witness_length = detail::big_from(field(m, "witness_length"));
      c.modular = md;
    }
    if (j.contains("cycle")) {
      const Json& cy = j.at("cycle");
      CycleData cd;
      for (const auto& b : field(cy, "blocks")) cd.blocks.push_back(al.parse(b.get<std::string>()));
      cd.qphi_sum = detail::big_from(field(cy, "qphi_sum"));
      c.cycle = cd;
    }
  } catch (const Json::exception& e) {
    throw Error(std::string("certificate: ") + e.what());
  }
  return c;
}

inline Json to_json(const Spectrum& sp) {
  Json roots = Json::array();
  for (const auto& r : sp.roots) {
    Json x;
    switch (r.kind) {
      case RootKind::Zero:
        x["kind"] = "zero";
        break;
      case RootKind::RootOfUnity:
        x["kind"] = "root_of_unity";
        x["order"] = r.order;
        break;
      case RootKind::Integer:
        x["kind"] = "integer";
        x["value"] = detail::big(r.integer);
        break;
      case RootKind::Algebraic:
        x["kind"] = "algebraic";
        break;
    }
    x["approx"] = detail::complex(r.approx);
    x["multiplicity"] = r.multiplicity;
    x["modulus"] = Json::array({r.modulus_lo, r.modulus_hi});
    roots.push_back(x);
  }
  Json cyc = Json::array();
  for (const auto& [m, e] : sp.cyclotomic) cyc.push_back(Json{{"m", m}, {"exponent", e}});
  return Json{{"char_poly", to_string(sp.char_poly)},
              {"zero_multiplicity", sp.zero_multiplicity},
              {"cyclotomic", cyc},
              {"residual", to_string(sp.residual)},
              {"roots", roots}};
}

inline Json to_json(const ScopeReport& r) {
  Json pv = Json::array();
  for (std::size_t i = 0; i < r.perron.vector.size(); ++i) {
    Frequency f;
    f.exact = r.perron.exact;
    if (f.exact) f.value = r.perron.exact_vector[i];
    f.approx = r.perron.vector[i];
    pv.push_back(detail::frequency(f));
  }
  Json perron{{"exact", r.perron.exact}, {"value", r.perron.value}};
  if (r.perron.exact) perron["integer_value"] = detail::big(r.perron.integer_value);
  perron["vector"] = pv;
  if (!r.perron.exact) perron["residual"] = r.perron.residual;
  return Json{{"spectrum", to_json(r.spectrum)},
              {"perron", perron},
              {"classification", to_string(r.classification)},
              {"verdict", to_string(r.verdict)}};
}

inline Json to_json(const FrequencyTable& t, const Alphabet& al) {
  Json out = Json::array();
  for (std::size_t i = 0; i < t.words.size(); ++i) {
    Json e = detail::frequency(t.values[i]);
    e["pattern"] = al.format(t.words[i]);
    out.push_back(e);
  }
  return out;
}

inline Json to_json(const PatternVerdict& pv, const Alphabet& al) {
  Json j{{"pattern", al.format(pv.pattern)},
         {"frequency", detail::frequency(pv.frequency)},
         {"verdict", to_string(pv.verdict)},
         {"basis", pv.basis}};
  j["certificate"] = pv.certificate ? to_json(*pv.certificate) : Json(nullptr);
  return j;
}

inline Json to_json(const AnalysisReport& r) {
  const Alphabet& al = r.substitution.alphabet();
  Json letters = Json::array(), factors = Json::array();
  for (const auto& pv : r.letters) letters.push_back(to_json(pv, al));
  for (const auto& pv : r.factors) factors.push_back(to_json(pv, al));
  return Json{{"substitution", r.substitution.to_string()},
              {"primitive", r.primitivity.primitive},
              {"primitivity_exponent", r.primitivity.exponent},
              {"letters_scope", to_json(r.spectral.letters)},
              {"factors_scope", to_json(r.spectral.factors)},
              {"letter_frequencies", to_json(r.letter_frequencies, al)},
              {"factor_frequencies", to_json(r.factor_frequencies, al)},
              {"letters", letters},
              {"factors", factors},
              {"warnings", r.warnings}};
}

inline Json to_json(const BalanceProfile& bp, const Alphabet& al) {
  return Json{{"pattern", al.format(bp.pattern)},
              {"horizon", bp.horizon},
              {"generated_length", bp.generated_length},
              {"stride", bp.stride},
              {"max", bp.max()},
              {"apparently_bounded", bp.apparently_bounded()},
              {"window_lengths", bp.window_lengths},
              {"values", bp.values}};
}

inline Json to_json(const DiscrepancyEstimate& de, const Alphabet& al) {
  Json cps = Json::array();
  for (const auto& [n, v] : de.checkpoints) cps.push_back(Json{{"length", n}, {"value", v}});
  Json j{{"pattern", al.format(de.pattern)},
         {"frequency", detail::frequency(de.frequency)},
         {"length", de.length},
         {"running_max", de.running_max}};
  j["exact_running_max"] = de.exact_running_max ? detail::rational(*de.exact_running_max) : Json(nullptr);
  j["checkpoints"] = cps;
  j["growth"] = de.growing ? "growing" : "apparently-bounded";
  return j;
}

inline Json to_json(const ExtensionGraph& g, const Alphabet& al) {
  Json l = Json::array(), r = Json::array(), e = Json::array();
  for (Symbol a : g.left) l.push_back(al.name(a));
  for (Symbol b : g.right) r.push_back(al.name(b));
  for (const auto& [a, b] : g.edges) e.push_back(Json::array({al.name(a), al.name(b)}));
  return Json{{"center", al.format(g.center)}, {"left", l}, {"right", r}, {"edges", e}, {"verdict", g.verdict()}};
}

inline Json to_json(const DendricReport& r, const Alphabet& al) {
  Json words = Json::array();
  for (const auto& w : r.words) words.push_back(Json{{"word", al.format(w.word)}, {"verdict", w.verdict}});
  Json j{{"max_length", r.max_length}, {"screen", "finite-length screen"}, {"all_trees", r.all_trees}};
  j["first_failure"] = r.first_failure ? Json{{"word", al.format(r.first_failure->word)}, {"verdict", r.first_failure->verdict}}
                                       : Json(nullptr);
  j["words"] = words;
  return j;
}

inline Json to_json(const Decomposition& d, const Alphabet& al) {
  Json terms = Json::array();
  for (const auto& [k, c] : d.terms()) terms.push_back(Json{{"letter", al.name(k.second)}, {"shift", k.first}, {"coeff", c}});
  return terms;
}

inline Json to_json(const ProbeReport& r, const Alphabet& al) {
  auto entries = [&](const std::vector<ProbeEntry>& xs) {
    Json out = Json::array();
    for (const auto& e : xs)
      out.push_back(Json{{"pattern", al.format(e.pattern)},
                         {"observed", e.observed},
                         {"apparently_bounded", e.bounded},
                         {"K", e.weight},
                         {"bound", e.bound}});
    return out;
  };
  return Json{{"dendric_screen", r.dendric_screen},
              {"screen_length", r.screen_length},
              {"letter_bound", r.letter_bound},
              {"letters_bounded", r.letters_bounded},
              {"verdicts_agree", r.verdicts_agree},
              {"bound_dominates", r.bound_dominates},
              {"letters", entries(r.letters)},
              {"factors", entries(r.factors)}};
}

}  // namespace balans

#pragma once

// One-shot dossier: primitivity, spectra of M_σ and M_{σ_2}, frequencies and
// a balance verdict with its evidence for every letter and 2-factor.

#include <optional>
#include <string>
#include <vector>

#include "balans/certificate.hpp"

namespace balans {

struct PatternVerdict {
  Word pattern;
  Frequency frequency;
  BalanceVerdict verdict = BalanceVerdict::Inconclusive;
  std::string basis;  // "spectrum", "certificate" or "none"
  std::optional<ImbalanceCertificate> certificate;
};

struct AnalysisReport {
  Substitution substitution;
  Primitivity primitivity;
  SpectralBalanceReport spectral;
  FrequencyTable letter_frequencies, factor_frequencies;
  std::vector<PatternVerdict> letters, factors;
  std::vector<std::string> warnings;
};

namespace detail {

inline PatternVerdict judge(CertificateEngine& eng, const ScopeReport& scope, const std::string& scope_name,
                            const Word& v, const Frequency& f) {
  PatternVerdict pv{v, f, BalanceVerdict::Inconclusive, "none", std::nullopt};
  if (scope.verdict == BalanceVerdict::BalancedCertified) {
    pv.verdict = BalanceVerdict::BalancedCertified;
    pv.basis = "spectrum";
    return pv;
  }
  if (scope.verdict == BalanceVerdict::UnbalancedCertified) {
    pv.verdict = BalanceVerdict::UnbalancedCertified;
    pv.basis = "spectrum";
    pv.certificate = spectral_certificate(eng.substitution(), scope, scope_name, v);
    return pv;
  }
  if (!f.exact) return pv;
  if (auto c = eng.certify(v, f.value)) {
    pv.verdict = BalanceVerdict::UnbalancedCertified;
    pv.basis = "certificate";
    pv.certificate = std::move(c);
  }
  return pv;
}

}  // namespace detail

inline AnalysisReport analyze(const Substitution& s) {
  AnalysisReport r;
  r.substitution = s;
  r.primitivity = is_primitive(s);
  if (!r.primitivity.primitive) throw Error("substitution is not primitive");
  r.spectral = spectral_balance_report(s);
  r.letter_frequencies = letter_frequencies(s);
  r.factor_frequencies = factor_frequencies(s, 2);
  CertificateEngine eng(s);
  for (std::size_t i = 0; i < r.letter_frequencies.words.size(); ++i)
    r.letters.push_back(detail::judge(eng, r.spectral.letters, "letters", r.letter_frequencies.words[i],
                                      r.letter_frequencies.values[i]));
  for (std::size_t i = 0; i < r.factor_frequencies.words.size(); ++i)
    r.factors.push_back(detail::judge(eng, r.spectral.factors, "factors", r.factor_frequencies.words[i],
                                      r.factor_frequencies.values[i]));
  if (!r.letter_frequencies.all_exact()) r.warnings.push_back("frequencies not certified rational");
  for (const auto* scope : {&r.spectral.letters, &r.spectral.factors})
    if (scope->verdict == BalanceVerdict::Inconclusive) {
      r.warnings.push_back(std::string(scope == &r.spectral.letters ? "letters" : "factors") +
                           ": Inconclusive by spectrum");
    }
  return r;
}

}  // namespace balans

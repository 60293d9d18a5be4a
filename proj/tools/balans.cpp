// Command-line front end: balans <command> <source> [options].
// Exit codes: 0 ok, 1 certificate rejected, 2 usage or parse error, 3 domain error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "balans.hpp"

namespace {

using namespace balans;

struct ParseError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A source is either inline text or the path of a file holding it.
std::string source_text(const std::string& arg) {
  std::error_code ec;
  if (arg.find("->") == std::string::npos && std::filesystem::is_regular_file(arg, ec)) return read_file(arg);
  return arg;
}

Substitution load_substitution(const std::string& arg) {
  try {
    return Substitution::parse(source_text(arg));
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

DirectiveSequence load_directive(const std::string& arg) {
  try {
    return DirectiveSequence::parse(source_text(arg));
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

Word load_pattern(const Alphabet& al, const std::string& text) {
  try {
    return al.parse(text);
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw Error("cannot write '" + out + "'");
  f << text;
}

std::string show(const Frequency& f) {
  if (f.exact) return boost::multiprecision::numerator(f.value).str() + "/" + boost::multiprecision::denominator(f.value).str();
  std::ostringstream os;
  os << f.approx << " (not certified rational)";
  return os.str();
}

std::string show_roots(const Spectrum& sp) {
  std::ostringstream os;
  os.precision(6);
  bool first = true;
  for (const auto& r : sp.roots) {
    os << (first ? "" : ", ");
    first = false;
    if (r.kind == RootKind::Integer) os << r.integer;
    else if (r.kind == RootKind::Zero) os << 0;
    else if (r.kind == RootKind::RootOfUnity && r.order <= 2) os << (r.order == 1 ? "1" : "-1");
    else if (r.approx.imag() == 0) os << r.approx.real();
    else os << r.approx.real() << (r.approx.imag() < 0 ? "-" : "+") << std::abs(r.approx.imag()) << "i";
    if (r.multiplicity > 1) os << " (x" << r.multiplicity << ")";
  }
  return os.str();
}

std::string describe(const ImbalanceCertificate& c, const Alphabet& al) {
  std::ostringstream os;
  os << to_string(c.kind);
  switch (c.kind) {
    case CertificateKind::DivisibilityReturnWord:
      os << " w=" << al.format(c.witness);
      break;
    case CertificateKind::DivisibilityBACBC:
      os << " bac=" << al.name(c.left) << al.format(c.witness) << al.name(c.right);
      break;
    case CertificateKind::PotentialInconsistency:
      os << " cycle=";
      for (std::size_t i = 0; c.cycle && i < c.cycle->blocks.size(); ++i) os << (i ? "," : "") << al.format(c.cycle->blocks[i]);
      if (c.cycle) os << " qphi_sum=" << c.cycle->qphi_sum;
      break;
    case CertificateKind::SpectralNecessary:
      if (c.spectral) os << " scope=" << c.spectral->scope << " " << to_string(c.spectral->classification);
      break;
  }
  if (c.modular)
    os << " q=" << c.modular->modulus << " |sigma^" << c.modular->witness_level << "(w)|=" << c.modular->witness_length;
  os << " level=" << c.level;
  return os.str();
}

void print_scope(std::ostream& os, const char* title, const ScopeReport& r) {
  os << title << ": char poly " << to_string(r.spectrum.char_poly) << "\n";
  os << "  roots " << show_roots(r.spectrum) << "\n";
  os << "  " << to_string(r.classification) << " -> " << to_string(r.verdict) << "\n";
}

int cmd_analyze(const std::string& src, bool json, const std::string& out) {
  Substitution s = load_substitution(src);
  AnalysisReport r = analyze(s);
  if (json) {
    emit(to_json(r).dump(2) + "\n", out);
    return 0;
  }
  const Alphabet& al = s.alphabet();
  std::ostringstream os;
  os << "substitution " << s.to_string() << "\n";
  os << "primitive (exponent " << r.primitivity.exponent << ")\n";
  print_scope(os, "M", r.spectral.letters);
  print_scope(os, "M2", r.spectral.factors);
  for (const auto* group : {&r.letters, &r.factors})
    for (const auto& pv : *group) {
      os << (group == &r.letters ? "letter " : "factor ") << al.format(pv.pattern) << "  mu=" << show(pv.frequency) << "  "
         << to_string(pv.verdict);
      if (pv.certificate) os << "  [" << describe(*pv.certificate, al) << "]";
      os << "\n";
    }
  for (const auto& w : r.warnings) os << "note: " << w << "\n";
  emit(os.str(), out);
  return 0;
}

int cmd_certify(const std::string& src, const std::string& pattern, std::optional<unsigned> level, bool json,
                const std::string& out) {
  Substitution s = load_substitution(src);
  Word v = load_pattern(s.alphabet(), pattern);
  require_in_language(s, v);
  Frequency f = factor_frequency(s, v);
  if (!f.exact) throw Error("requires rational frequency");
  CertificateEngine eng(s);
  std::optional<ImbalanceCertificate> c;
  if (level) {
    c = eng.potential(v, f.value, level);
  } else {
    c = eng.certify(v, f.value);
  }
  if (!c) {
    SpectralBalanceReport sr = spectral_balance_report(s);
    const ScopeReport& scope = v.size() == 1 ? sr.letters : sr.factors;
    if (json) {
      Json j{{"pattern", s.alphabet().format(v)}, {"certificate", nullptr}, {"spectral_verdict", to_string(scope.verdict)}};
      emit(j.dump(2) + "\n", out);
    } else {
      std::cout << "no certificate found; spectrum " << to_string(scope.verdict) << "\n";
    }
    return 0;
  }
  if (json || !out.empty()) emit(to_json(*c).dump(2) + "\n", out);
  if (!json) std::cout << describe(*c, s.alphabet()) << "\n";
  return 0;
}

int cmd_verify(const std::string& file, bool json) {
  Json j;
  try {
    j = Json::parse(read_file(file));
  } catch (const Json::exception& e) {
    throw ParseError(std::string("certificate: ") + e.what());
  }
  VerifyResult vr;
  try {
    vr = verify_certificate(certificate_from_json(j));
  } catch (const Error& e) {
    vr = {false, e.what()};
  }
  if (json) {
    std::cout << Json{{"ok", vr.ok}, {"reason", vr.reason}}.dump(2) << "\n";
  } else {
    std::cout << (vr.ok ? "certificate verified" : "certificate rejected: " + vr.reason) << "\n";
  }
  return vr.ok ? 0 : 1;
}

int cmd_balance(const std::string& src, const std::string& pattern, std::size_t n, std::size_t l, std::size_t stride,
                bool json, const std::string& csv, const std::string& out) {
  Substitution s = load_substitution(src);
  Word v = load_pattern(s.alphabet(), pattern);
  require_in_language(s, v);
  Word text = generate_text(s, l);
  BalanceProfile bp = balance_profile(text, v, n, stride);
  DiscrepancyEstimate de = discrepancy_profile(text, v, factor_frequency(s, v));
  if (!csv.empty()) {
    std::ostringstream os;
    os << "n,B\n";
    for (std::size_t i = 0; i < bp.values.size(); ++i) os << bp.window_lengths[i] << "," << bp.values[i] << "\n";
    emit(os.str(), csv);
  }
  const Alphabet& al = s.alphabet();
  if (json) {
    emit(Json{{"balance", to_json(bp, al)}, {"discrepancy", to_json(de, al)}}.dump(2) + "\n", out);
    return 0;
  }
  std::ostringstream os;
  os << "pattern " << al.format(v) << "  N=" << n << "  L=" << l << "\n";
  os << "max B = " << bp.max() << (bp.apparently_bounded() ? "  (apparently bounded)" : "  (still growing)") << "\n";
  os << "discrepancy running max = " << de.running_max << "  (" << (de.growing ? "growing" : "apparently-bounded") << ")\n";
  emit(os.str(), out);
  return 0;
}

int cmd_dendric(const std::string& src, std::size_t max_len, bool json, const std::string& out) {
  Substitution s = load_substitution(src);
  DendricReport r = dendric_check(s, max_len);
  const Alphabet& al = s.alphabet();
  if (json) {
    emit(to_json(r, al).dump(2) + "\n", out);
    return 0;
  }
  std::ostringstream os;
  os << "checked " << r.words.size() << " words up to length " << max_len << " (finite screen)\n";
  if (r.all_trees) {
    os << "all extension graphs are trees\n";
  } else {
    std::string w = al.format(r.first_failure->word);
    os << "first failure at '" << (w.empty() ? "ε" : w) << "': " << r.first_failure->verdict << "\n";
  }
  emit(os.str(), out);
  return 0;
}

int cmd_decompose(const std::string& src, const std::string& pattern, bool json, const std::string& out) {
  Substitution s = load_substitution(src);
  Word v = load_pattern(s.alphabet(), pattern);
  LanguageCache lang(s, v.size() + 2);
  Decomposition d = cylinder_decomposition(lang, v);
  const Alphabet& al = s.alphabet();
  if (json) {
    emit(Json{{"pattern", al.format(v)}, {"terms", to_json(d, al)}, {"K", d.weight()}}.dump(2) + "\n", out);
    return 0;
  }
  std::ostringstream os;
  os << "[" << al.format(v) << "] =";
  bool first = true;
  for (const auto& [k, c] : d.terms()) {
    os << (c < 0 ? " - " : first ? " " : " + ");
    if (std::abs(c) != 1) os << std::abs(c) << "*";
    os << "[x(p" << (k.first < 0 ? "" : "+") << k.first << ")=" << al.name(k.second) << "]";
    first = false;
  }
  os << "\nK = " << d.weight() << "\n";
  emit(os.str(), out);
  return 0;
}

int cmd_ar(const std::string& src, std::size_t length, std::size_t n, bool probe, std::size_t max_len, bool json,
           const std::string& out) {
  DirectiveSequence dir = load_directive(src);
  Word text = ar_generate(dir, length);
  const Alphabet al = dir.alphabet();
  std::optional<std::size_t> h;
  if (dir.d == 3) h = ar_run_bound(dir);
  Json j{{"directive", dir.to_string()}, {"length", text.size()}};
  j["run_bound"] = h ? Json(*h) : Json(nullptr);
  j["predicted_letter_bound"] = h ? Json(2 * *h + 1) : Json(nullptr);
  std::ostringstream os;
  os << "directive " << dir.to_string() << "  length " << text.size() << "\n";
  if (h) os << "run bound h=" << *h << "  predicted letter balance <= " << 2 * *h + 1 << "\n";
  if (probe) {
    Json letters = Json::array();
    std::int64_t worst = 0;
    for (Symbol a = 0; a < dir.d; ++a) {
      BalanceProfile bp = balance_profile(text, Word{a}, n);
      letters.push_back(Json{{"letter", al.name(a)}, {"max", bp.max()}});
      worst = std::max(worst, bp.max());
      os << "letter " << al.name(a) << "  max B = " << bp.max() << "\n";
    }
    j["letters"] = letters;
    j["observed_letter_balance"] = worst;
    if (h) {
      j["within_bound"] = worst <= static_cast<std::int64_t>(2 * *h + 1);
      os << (worst <= static_cast<std::int64_t>(2 * *h + 1) ? "within" : "EXCEEDS") << " the predicted bound\n";
    }
    if (max_len >= 2) {
      ProbeReport pr = letters_vs_factors_probe(dir, max_len, n, length);
      j["probe"] = to_json(pr, al);
      os << "factors up to length " << max_len << ": verdicts " << (pr.verdicts_agree ? "agree" : "disagree")
         << ", |A|*K*C bound " << (pr.bound_dominates ? "dominates" : "is exceeded") << "\n";
    }
  }
  emit(json ? j.dump(2) + "\n" : os.str(), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Balancedness of substitutive and Arnoux-Rauzy words"};
  app.require_subcommand(1);
  std::string source, pattern, out, csv;
  bool json = false, probe = false;
  std::size_t n = 512, l = std::size_t{1} << 20, stride = 1, max_len = 0, length = 100000;
  std::optional<unsigned> level;

  auto common = [&](CLI::App* c) {
    c->add_flag("--json", json, "JSON output");
    c->add_option("--out", out, "write the report to a file");
  };
  auto* analyze_cmd = app.add_subcommand("analyze", "spectra, frequencies and verdicts for letters and 2-factors");
  analyze_cmd->add_option("source", source, "substitution or file")->required();
  common(analyze_cmd);

  auto* certify_cmd = app.add_subcommand("certify", "search an imbalance certificate for a pattern");
  certify_cmd->add_option("source", source)->required();
  certify_cmd->add_option("--pattern", pattern)->required();
  certify_cmd->add_option("--level", level, "run only the potential test at this level");
  common(certify_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "re-check a certificate file");
  verify_cmd->add_option("certificate", source)->required();
  verify_cmd->add_flag("--json", json);

  auto* balance_cmd = app.add_subcommand("balance", "sliding-window balance profile and discrepancy");
  balance_cmd->add_option("source", source)->required();
  balance_cmd->add_option("--pattern", pattern)->required();
  balance_cmd->add_option("--N", n, "largest window length")->check(CLI::PositiveNumber);
  balance_cmd->add_option("--L", l, "generated length")->check(CLI::PositiveNumber);
  balance_cmd->add_option("--stride", stride, "window length step")->check(CLI::PositiveNumber);
  balance_cmd->add_option("--csv", csv, "write n,B(n) rows");
  common(balance_cmd);

  auto* dendric_cmd = app.add_subcommand("dendric", "extension-graph screen");
  dendric_cmd->add_option("source", source)->required();
  dendric_cmd->add_option("--max-len", max_len)->default_val(8);
  common(dendric_cmd);

  auto* decompose_cmd = app.add_subcommand("decompose", "cylinder indicator as shifted letter indicators");
  decompose_cmd->add_option("source", source)->required();
  decompose_cmd->add_option("--pattern", pattern)->required();
  common(decompose_cmd);

  auto* ar_cmd = app.add_subcommand("ar", "Arnoux-Rauzy word from a directive sequence");
  ar_cmd->add_option("directive", source)->required();
  ar_cmd->add_option("--length", length)->check(CLI::PositiveNumber);
  ar_cmd->add_option("--N", n)->check(CLI::PositiveNumber);
  ar_cmd->add_flag("--probe-letters", probe, "scan letter balance");
  ar_cmd->add_option("--max-len", max_len, "also probe factors up to this length");
  common(ar_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(source, json, out);
    if (*certify_cmd) return cmd_certify(source, pattern, level, json, out);
    if (*verify_cmd) return cmd_verify(source, json);
    if (*balance_cmd) return cmd_balance(source, pattern, n, l, stride, json, csv, out);
    if (*dendric_cmd) return cmd_dendric(source, max_len, json, out);
    if (*decompose_cmd) return cmd_decompose(source, pattern, json, out);
    if (*ar_cmd) {
      if (n > length) n = length;
      return cmd_ar(source, length, n, probe, max_len, json, out);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

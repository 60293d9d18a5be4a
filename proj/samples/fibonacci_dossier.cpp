// Spectral verdicts, letter balance and a cylinder decomposition for the
// Fibonacci substitution.

#include <iostream>

#include "balans.hpp"

int main() {
  using namespace balans;
  Substitution fib = Substitution::parse("0->01;1->0");
  AnalysisReport r = analyze(fib);
  std::cout << "M:  " << to_string(r.spectral.letters.spectrum.char_poly) << "  "
            << to_string(r.spectral.letters.verdict) << "\n";
  std::cout << "M2: " << to_string(r.spectral.factors.spectrum.char_poly) << "  "
            << to_string(r.spectral.factors.verdict) << "\n";

  Word text = generate_text(fib, 100000);
  BalanceProfile bp = balance_profile(text, Word{0}, 1000);
  std::cout << "max B_0(n), n <= 1000: " << bp.max() << "\n";

  LanguageCache lang(fib, 6);
  Decomposition d = cylinder_decomposition(lang, fib.alphabet().parse("010"));
  std::cout << "[010] = " << to_json(d, fib.alphabet()).dump() << "\n";
}

#pragma once

// Sliding-window balance profiles B_v(n) and one-sided discrepancy monitors
// over generated text.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "balans/frequency.hpp"
#include "balans/parallel.hpp"
#include "balans/substitution.hpp"

namespace balans {

struct BalanceProfile {
  Word pattern;
  std::size_t horizon = 0;           // N
  std::size_t generated_length = 0;  // L
  std::size_t stride = 1;
  std::vector<std::size_t> window_lengths;
  std::vector<std::int64_t> values;  // B_v(n) for each scanned window length

  std::int64_t max() const { return values.empty() ? 0 : *std::max_element(values.begin(), values.end()); }

  // Largest B over window lengths <= n.
  std::int64_t max_up_to(std::size_t n) const {
    std::int64_t m = 0;
    for (std::size_t i = 0; i < values.size() && window_lengths[i] <= n; ++i) m = std::max(m, values[i]);
    return m;
  }

  // Monitor, not a proof: the maximum is already reached within the first tenth.
  bool apparently_bounded() const { return max_up_to(std::max<std::size_t>(1, horizon / 10)) == max(); }
};

// Occurrence prefix counts: C[i] = #{occurrences of v starting before i}.
inline std::vector<std::uint32_t> occurrence_prefix_counts(WordView text, WordView v) {
  if (text.size() >= std::numeric_limits<std::uint32_t>::max()) throw Error("text too long");
  auto marks = occurrence_marks(text, v);
  std::vector<std::uint32_t> c(text.size() + 1, 0);
  for (std::size_t i = 0; i < text.size(); ++i) c[i + 1] = c[i] + marks[i];
  return c;
}

// Window lengths stride, 2·stride, ... up to N.
inline BalanceProfile balance_profile(WordView text, WordView v, std::size_t horizon, std::size_t stride = 1) {
  if (v.empty()) throw Error("empty pattern");
  if (stride == 0) throw Error("stride must be positive");
  if (horizon == 0 || horizon > text.size()) throw Error("window exceeds word");
  BalanceProfile bp;
  bp.pattern.assign(v.begin(), v.end());
  bp.horizon = horizon;
  bp.generated_length = text.size();
  bp.stride = stride;
  for (std::size_t n = stride; n <= horizon; n += stride) bp.window_lengths.push_back(n);
  bp.values.assign(bp.window_lengths.size(), 0);
  const auto c = occurrence_prefix_counts(text, v);
  const std::size_t len = text.size(), k = v.size();
  parallel_for(bp.window_lengths.size(), [&](std::size_t idx) {
    const std::size_t n = bp.window_lengths[idx];
    if (n < k) return;
    const std::size_t m = n - k + 1;
    const std::uint32_t* lo = c.data();
    const std::uint32_t* hi = c.data() + m;
    std::uint32_t mn = std::numeric_limits<std::uint32_t>::max(), mx = 0;
    for (std::size_t s = 0; s + n <= len; ++s) {
      std::uint32_t cnt = hi[s] - lo[s];
      mn = std::min(mn, cnt);
      mx = std::max(mx, cnt);
    }
    bp.values[idx] = static_cast<std::int64_t>(mx) - static_cast<std::int64_t>(mn);
  });
  return bp;
}

inline void require_in_language(const Substitution& s, WordView v) {
  if (v.empty()) throw Error("empty pattern");
  if (!language(s, v.size()).contains(v)) throw Error("pattern not in language");
}

inline BalanceProfile balance_function(const Substitution& s, WordView v, std::size_t horizon, std::size_t length,
                                       std::size_t stride = 1) {
  require_in_language(s, v);
  Word text = generate_text(s, length);
  return balance_profile(text, v, horizon, stride);
}

struct DiscrepancyEstimate {
  Word pattern;
  Frequency frequency;
  std::size_t length = 0;
  double running_max = 0;
  std::optional<Rational> exact_running_max;  // when the frequency is exact
  std::vector<std::pair<std::size_t, double>> checkpoints;  // (L/100, L/10, L)
  bool growing = false;
};

// max_{n <= L} | |x_{[0,n)}|_v − n·μ_v |, occurrences counted when fully inside the prefix.
inline DiscrepancyEstimate discrepancy_profile(WordView text, WordView v, const Frequency& mu) {
  if (v.empty()) throw Error("empty pattern");
  DiscrepancyEstimate de;
  de.pattern.assign(v.begin(), v.end());
  de.frequency = mu;
  de.length = text.size();
  const auto c = occurrence_prefix_counts(text, v);
  const std::size_t k = v.size();
  const std::vector<std::size_t> marks{std::max<std::size_t>(1, text.size() / 100), std::max<std::size_t>(1, text.size() / 10),
                                       text.size()};
  std::size_t next_mark = 0;
  std::int64_t p = 0, q = 1;
  if (mu.exact) {
    const BigInt bp = boost::multiprecision::numerator(mu.value), bq = boost::multiprecision::denominator(mu.value);
    if (bq > std::numeric_limits<std::int32_t>::max()) throw Error("frequency denominator too large for a scan");
    p = bp.convert_to<std::int64_t>();
    q = bq.convert_to<std::int64_t>();
  }
  __int128 best_num = 0;
  double best = 0;
  for (std::size_t n = 1; n <= text.size(); ++n) {
    const std::uint64_t cnt = n >= k ? c[n - k + 1] : 0;
    if (mu.exact) {
      __int128 num = static_cast<__int128>(q) * cnt - static_cast<__int128>(p) * n;
      if (num < 0) num = -num;
      if (num > best_num) {
        best_num = num;
        best = static_cast<double>(best_num) / static_cast<double>(q);
      }
    } else {
      best = std::max(best, std::abs(static_cast<double>(cnt) - n * mu.approx));
    }
    while (next_mark < marks.size() && n == marks[next_mark]) {
      de.checkpoints.emplace_back(n, best);
      ++next_mark;
    }
  }
  de.running_max = best;
  if (mu.exact) de.exact_running_max = Rational(BigInt(static_cast<std::int64_t>(best_num)), BigInt(q));
  de.growing = de.checkpoints.size() == 3 && de.checkpoints[0].second < de.checkpoints[1].second &&
               de.checkpoints[1].second < de.checkpoints[2].second;
  return de;
}

inline DiscrepancyEstimate discrepancy_estimate(const Substitution& s, WordView v, std::size_t length) {
  require_in_language(s, v);
  Frequency mu = factor_frequency(s, v);
  Word text = generate_text(s, length);
  return discrepancy_profile(text, v, mu);
}

}  // namespace balans

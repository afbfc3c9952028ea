//
// Copyright 2026 The dpsurv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dpsurv/noise.h"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "dpsurv/numeric_format.h"
#include "string_view_bridge.h"

namespace dpsurv {
namespace {

std::atomic<std::uint64_t> total_draws{0};

}  // namespace

NoiseSource::NoiseSource(std::uint64_t seed) : engine_(seed), seed_(seed) {}

double NoiseSource::NextUniform() {
  ++position_;
  total_draws.fetch_add(1, std::memory_order_relaxed);
  return DrawUniform();
}

double NoiseSource::DrawUniform() {
  // Midpoint of one of 2^53 equal cells: never 0, never 1.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t NoiseSource::TotalDraws() {
  return total_draws.load(std::memory_order_relaxed);
}

double LaplaceFromUniform(double u, double scale) {
  const double centered = u - 0.5;
  if (centered == 0.0) return 0.0;
  const double sign = centered > 0.0 ? 1.0 : -1.0;
  return -scale * sign * std::log1p(-2.0 * std::abs(centered));
}

absl::StatusOr<double> LaplaceSample(double scale, NoiseSource& source) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Laplace scale must be positive and finite, got ",
                     FormatDouble(scale)));
  }
  return LaplaceFromUniform(source.NextUniform(), scale);
}

absl::StatusOr<std::uint64_t> ParseSeed(std::string_view text) {
  const std::string_view original = text;
  text = ToStd(absl::StripAsciiWhitespace(ToAbsl(text)));
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    text.remove_prefix(2);
    base = 16;
  }
  std::uint64_t seed = 0;
  const auto result =
      std::from_chars(text.data(), text.data() + text.size(), seed, base);
  if (text.empty() || result.ec != std::errc() ||
      result.ptr != text.data() + text.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("seed must be a decimal or 0x-hex 64-bit integer, got '",
                     ToAbsl(original), "'"));
  }
  return seed;
}

}  // namespace dpsurv

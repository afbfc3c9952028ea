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

#ifndef DPSURV_NOISE_H_
#define DPSURV_NOISE_H_

#include <cstdint>
#include <random>
#include <string_view>

#include "absl/status/statusor.h"

namespace dpsurv {

// Seeded stream of uniforms in the open interval (0, 1). The same seed and
// draw order always yield the same values. Not thread-safe: one owner per
// source, independent sources for parallel work.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed);
  virtual ~NoiseSource() = default;

  NoiseSource(const NoiseSource&) = delete;
  NoiseSource& operator=(const NoiseSource&) = delete;

  double NextUniform();

  std::uint64_t seed() const { return seed_; }
  // Number of uniforms drawn so far.
  std::uint64_t position() const { return position_; }

  // Uniforms drawn by every source in the process. Lets tests assert that a
  // code path consumed no noise at all.
  static std::uint64_t TotalDraws();

 protected:
  // Tests override this to force particular uniforms.
  virtual double DrawUniform();

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  std::uint64_t position_ = 0;
};

// Inverse-CDF Laplace(0, scale) deviate:
//   -scale * sign(u - 1/2) * ln(1 - 2 |u - 1/2|).
double LaplaceFromUniform(double u, double scale);

// One draw from Laplace(0, scale). Fails for scale <= 0 or non-finite scale.
absl::StatusOr<double> LaplaceSample(double scale, NoiseSource& source);

// Decimal or 0x-prefixed hexadecimal 64-bit seed.
absl::StatusOr<std::uint64_t> ParseSeed(std::string_view text);

}  // namespace dpsurv

#endif  // DPSURV_NOISE_H_

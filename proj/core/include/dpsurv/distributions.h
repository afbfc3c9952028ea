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

#ifndef DPSURV_DISTRIBUTIONS_H_
#define DPSURV_DISTRIBUTIONS_H_

namespace dpsurv {

// Standard normal CDF.
double NormalCdf(double x);

// Inverse of NormalCdf for p in (0, 1): a rational approximation followed by
// one Newton step against NormalCdf. Absolute error below 1e-10 over
// [1e-12, 1 - 1e-12].
double NormalQuantile(double p);

// P[X >= x] for X ~ chi-square with one degree of freedom, using
// P = erfc(sqrt(x / 2)). Returns 1 for x <= 0.
double ChiSquare1UpperTail(double x);

}  // namespace dpsurv

#endif  // DPSURV_DISTRIBUTIONS_H_

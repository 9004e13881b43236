/* Copyright 2026 The sca-eval Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef SCAEVAL_FRECHET_HPP_
#define SCAEVAL_FRECHET_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace scaeval {

// Feature vectors extracted elsewhere (Inception pool features for FID,
// I3D logits for FVD). File form:
//   features <label> <dim> <count>
//   <dim space-separated decimals>   (count lines)
struct FeatureSet {
  std::string label;
  int dim = 0;
  std::vector<std::vector<double>> vectors;
};

FeatureSet LoadFeatures(const std::filesystem::path& path);
FeatureSet ParseFeatures(std::istream& in);
void WriteFeatures(const FeatureSet& set, std::ostream& out);

struct FrechetResult {
  double distance = 0.0;    // mean_term + trace_term
  double mean_term = 0.0;   // |mu_a - mu_b|^2
  double trace_term = 0.0;  // Tr(S_a + S_b - 2 (S_a S_b)^1/2)
  // Set when a negative eigenvalue was clamped to zero while taking a
  // matrix square root.
  bool degenerate_covariance = false;
  int clamped_eigenvalues = 0;
};

// Fréchet distance between Gaussians fitted to two feature sets (sample
// covariance, n - 1). The cross term uses the symmetric form
// Tr((sqrt(S_a) S_b sqrt(S_a))^1/2), evaluated by eigendecomposition.
// Throws kDimensionMismatch, or kInvalidArgument with fewer than two
// vectors in a set.
FrechetResult FrechetDistance(const FeatureSet& a, const FeatureSet& b);

}  // namespace scaeval

#endif  // SCAEVAL_FRECHET_HPP_

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

#include "scaeval/frechet.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include <Eigen/Dense>

#include "scaeval/error.hpp"
#include "text_util.hpp"

namespace scaeval {

namespace {

[[noreturn]] void Malformed(int line_no, const std::string& why) {
  throw Error(ErrorCode::kMalformedRecord, "line " + std::to_string(line_no) + ": " + why);
}

Eigen::MatrixXd ToMatrix(const FeatureSet& s) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(s.vectors.size()), s.dim);
  for (std::size_t i = 0; i < s.vectors.size(); ++i) {
    if (static_cast<int>(s.vectors[i].size()) != s.dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  s.label + ": vector " + std::to_string(i) + " has " +
                      std::to_string(s.vectors[i].size()) + " components, expected " +
                      std::to_string(s.dim));
    }
    for (int j = 0; j < s.dim; ++j) m(static_cast<Eigen::Index>(i), j) = s.vectors[i][j];
  }
  return m;
}

// Symmetric PSD square root by eigendecomposition; negative eigenvalues
// are clamped to zero and counted.
Eigen::MatrixXd SqrtPsd(const Eigen::MatrixXd& m, int& clamped) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  Eigen::VectorXd lambda = eig.eigenvalues();
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < 0.0) {
      ++clamped;
      lambda(i) = 0.0;
    }
  }
  return eig.eigenvectors() * lambda.cwiseSqrt().asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

FeatureSet ParseFeatures(std::istream& in) {
  FeatureSet s;
  std::string line;
  int line_no = 0;
  std::size_t count = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (internal::IsSkippable(line)) continue;
    const auto t = internal::SplitWs(line);
    if (!have_header) {
      if (t.size() != 4 || t[0] != "features") Malformed(line_no, "expected 'features <label> <dim> <count>'");
      const auto dim = internal::ToInt<int>(t[2]);
      const auto n = internal::ToInt<std::size_t>(t[3]);
      if (!dim || *dim < 1 || !n) Malformed(line_no, "bad dim or count");
      s.label = std::string(t[1]);
      s.dim = *dim;
      count = *n;
      have_header = true;
      s.vectors.reserve(count);
      continue;
    }
    if (static_cast<int>(t.size()) != s.dim) {
      throw Error(ErrorCode::kDimensionMismatch, "line " + std::to_string(line_no) + ": " +
                                                     std::to_string(t.size()) +
                                                     " components, expected " + std::to_string(s.dim));
    }
    std::vector<double> v(s.dim);
    for (int j = 0; j < s.dim; ++j) {
      const auto x = internal::ToDouble(t[j]);
      if (!x || !std::isfinite(*x)) Malformed(line_no, "bad component '" + std::string(t[j]) + "'");
      v[j] = *x;
    }
    s.vectors.push_back(std::move(v));
  }
  if (!have_header) throw Error(ErrorCode::kMalformedRecord, "missing 'features' header");
  if (s.vectors.size() != count) {
    throw Error(ErrorCode::kMalformedRecord, "header promises " + std::to_string(count) +
                                                 " vectors, file has " + std::to_string(s.vectors.size()));
  }
  return s;
}

FeatureSet LoadFeatures(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  return ParseFeatures(in);
}

void WriteFeatures(const FeatureSet& s, std::ostream& out) {
  out << "features " << s.label << ' ' << s.dim << ' ' << s.vectors.size() << '\n';
  for (const auto& v : s.vectors) {
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (j) out << ' ';
      out << internal::ShortestDouble(v[j]);
    }
    out << '\n';
  }
}

FrechetResult FrechetDistance(const FeatureSet& a, const FeatureSet& b) {
  if (a.dim != b.dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                a.label + " has dim " + std::to_string(a.dim) + ", " + b.label + " has dim " +
                    std::to_string(b.dim));
  }
  if (a.vectors.size() < 2 || b.vectors.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "covariance needs at least two vectors per set");
  }
  const Eigen::MatrixXd xa = ToMatrix(a);
  const Eigen::MatrixXd xb = ToMatrix(b);
  const Eigen::RowVectorXd mu_a = xa.colwise().mean();
  const Eigen::RowVectorXd mu_b = xb.colwise().mean();
  const Eigen::MatrixXd ca = xa.rowwise() - mu_a;
  const Eigen::MatrixXd cb = xb.rowwise() - mu_b;
  const Eigen::MatrixXd sigma_a = (ca.transpose() * ca) / static_cast<double>(xa.rows() - 1);
  const Eigen::MatrixXd sigma_b = (cb.transpose() * cb) / static_cast<double>(xb.rows() - 1);

  FrechetResult r;
  r.mean_term = (mu_a - mu_b).squaredNorm();

  // Tr((S_a S_b)^1/2) = Tr((sqrt(S_a) S_b sqrt(S_a))^1/2); the inner matrix
  // is symmetric PSD, so a self-adjoint solver applies.
  int clamped = 0;
  const Eigen::MatrixXd root_a = SqrtPsd(sigma_a, clamped);
  Eigen::MatrixXd inner = root_a * sigma_b * root_a;
  inner = 0.5 * (inner + inner.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(inner, Eigen::EigenvaluesOnly);
  double trace_sqrt = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const double l = eig.eigenvalues()(i);
    if (l < 0.0) {
      ++clamped;
      continue;
    }
    trace_sqrt += std::sqrt(l);
  }
  r.trace_term = sigma_a.trace() + sigma_b.trace() - 2.0 * trace_sqrt;
  r.distance = r.mean_term + r.trace_term;
  r.clamped_eigenvalues = clamped;
  r.degenerate_covariance = clamped > 0;
  return r;
}

}  // namespace scaeval

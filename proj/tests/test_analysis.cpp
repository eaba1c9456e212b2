#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "anitv/analysis.hpp"
#include "anitv/synthesis.hpp"

using namespace anitv;

TEST_CASE("psnr hand values and sentinel") {
  Image a(10, 10), t(10, 10);
  REQUIRE(std::isinf(psnr(a, t)));  // identical -> +inf sentinel

  Image one(1, 1), zero(1, 1);
  one.data[0] = 1.0;
  REQUIRE(psnr(one, zero) == Catch::Approx(0.0).margin(1e-12));  // N=1, error 1

  Image x(10, 10), truth(10, 10);
  for (double& v : x.data) v = 0.1;  // uniform error 0.1, N=100 -> 20 dB
  REQUIRE(psnr(x, truth) == Catch::Approx(20.0).margin(1e-12));

  Image bad(9, 10);
  REQUIRE_THROWS_AS(psnr(bad, truth), shape_error);
}

TEST_CASE("psnr strictly decreases under any perturbation") {
  Image truth = make_test_image(TestImageKind::squares, 32, 32);
  Image near = truth;
  near.at(3, 3) += 1e-6;
  Image far = truth;
  far.at(3, 3) += 1e-3;
  REQUIRE(psnr(near, truth) < psnr(truth, truth));
  REQUIRE(psnr(far, truth) < psnr(near, truth));
}

namespace {
LabelMap map_of(int w, int h, std::vector<int> labels, int K) {
  LabelMap m;
  m.width = w;
  m.height = h;
  m.K = K;
  m.labels = std::move(labels);
  return m;
}
}  // namespace

TEST_CASE("jaccard index hand cases") {
  // 2x2 maps.
  LabelMap a = map_of(2, 2, {1, 1, 2, 2}, 2);
  LabelMap b = map_of(2, 2, {1, 1, 2, 2}, 2);
  REQUIRE(jaccard(a, b, 1) == 1.0);
  REQUIRE(jaccard(a, b, 2) == 1.0);

  LabelMap c = map_of(2, 2, {2, 2, 1, 1}, 2);
  REQUIRE(jaccard(a, c, 1) == 0.0);  // disjoint phase-1 regions

  // Half overlap of equal-area regions: |inter| = 1, |union| = 3.
  LabelMap d = map_of(2, 2, {1, 1, 2, 2}, 2);
  LabelMap e = map_of(2, 2, {2, 1, 1, 2}, 2);
  REQUIRE(jaccard(d, e, 1) == Catch::Approx(1.0 / 3.0));

  // Phase absent from both maps: agreement by convention.
  REQUIRE(jaccard(a, b, 7) == 1.0);

  // Symmetry.
  REQUIRE(jaccard(d, e, 2) == jaccard(e, d, 2));

  LabelMap wrong(map_of(3, 2, {1, 1, 1, 2, 2, 2}, 2));
  REQUIRE_THROWS_AS(jaccard(a, wrong, 1), shape_error);
}

TEST_CASE("1-D k-means recovers separated clusters") {
  std::vector<double> vals;
  for (int i = 0; i < 40; ++i) vals.push_back(0.1 + 1e-3 * (i % 5));
  for (int i = 0; i < 30; ++i) vals.push_back(0.5 + 1e-3 * (i % 5));
  for (int i = 0; i < 50; ++i) vals.push_back(0.9 + 1e-3 * (i % 5));
  std::vector<double> centers = kmeans_1d(vals, 3);
  REQUIRE(centers.size() == 3);
  REQUIRE(std::is_sorted(centers.begin(), centers.end()));
  REQUIRE(centers[0] == Catch::Approx(0.102).margin(1e-3));
  REQUIRE(centers[1] == Catch::Approx(0.502).margin(1e-3));
  REQUIRE(centers[2] == Catch::Approx(0.902).margin(1e-3));

  // Deterministic: same data, same centers.
  REQUIRE(kmeans_1d(vals, 3) == centers);
}

TEST_CASE("k-means edge cases") {
  // K = 1: the single center is the mean.
  std::vector<double> v = {1.0, 2.0, 6.0};
  std::vector<double> c = kmeans_1d(v, 1);
  REQUIRE(c.size() == 1);
  REQUIRE(c[0] == Catch::Approx(3.0));

  // Fewer distinct values than phases.
  std::vector<double> flat = {0.5, 0.5, 0.5, 0.7};
  REQUIRE_THROWS_AS(kmeans_1d(flat, 3), degenerate_cluster_error);
  REQUIRE_NOTHROW(kmeans_1d(flat, 2));

  REQUIRE_THROWS_AS(kmeans_1d(v, 0), parameter_error);
  REQUIRE_THROWS_AS(kmeans_1d(std::vector<double>{}, 1), parameter_error);

  // Heavily tied data still seeds K distinct centers.
  std::vector<double> tied;
  for (int i = 0; i < 95; ++i) tied.push_back(0.2);
  tied.push_back(0.8);
  tied.push_back(0.81);
  std::vector<double> c2 = kmeans_1d(tied, 2);
  REQUIRE(c2[0] == Catch::Approx(0.2).margin(1e-9));
  REQUIRE(c2[1] == Catch::Approx(0.805).margin(1e-2));
}

TEST_CASE("nearest-center labels are 1-based and break ties low") {
  Image img(2, 2);
  img.at(0, 0) = 0.0;
  img.at(0, 1) = 0.5;  // exactly between the two centers: lower label wins
  img.at(1, 0) = 0.9;
  img.at(1, 1) = 0.45;
  LabelMap m = label_by_nearest(img, {0.4, 0.6});
  REQUIRE(m.K == 2);
  REQUIRE(m.labels == std::vector<int>{1, 1, 2, 1});
}

TEST_CASE("quantize on a clean piecewise-constant image is exact") {
  Image img = make_test_image(TestImageKind::geometry_like, 32, 32);
  QuantizeResult q = quantize_labels(img, 5);
  REQUIRE(q.centers.size() == 5);
  // The five painted levels come back as the centers.
  std::vector<double> want = {0.05, 0.30, 0.55, 0.78, 0.95};
  for (int j = 0; j < 5; ++j) REQUIRE(q.centers[j] == Catch::Approx(want[j]).margin(1e-9));
  // Labels follow the painted level of each pixel exactly.
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    int lbl = q.labels.labels[i];
    REQUIRE(img.data[i] == Catch::Approx(want[lbl - 1]).margin(1e-12));
  }
}

TEST_CASE("two-stage segmentation on clean data recovers every phase") {
  const int n = 32;
  Image clean = make_test_image(TestImageKind::twocircles, n, n);
  GridOperator A(make_identity_kernel(), n, n);
  RestorationModel m{A, clean, 1e7, 2.0, make_potential(PotentialKind::power, 0.5)};
  SolverConfig cfg;
  SegmentationResult seg = two_stage_segment(m, cfg, 3);
  REQUIRE(seg.centers.size() == 3);
  REQUIRE(seg.labels.K == 3);

  // Ground truth from the clean phases.
  QuantizeResult gt = quantize_labels(clean, 3);
  for (int phase = 1; phase <= 3; ++phase)
    REQUIRE(jaccard(seg.labels, gt.labels, phase) == 1.0);
  for (int j = 0; j < 3; ++j)
    REQUIRE(seg.centers[j] == Catch::Approx(gt.centers[j]).margin(1e-3));
  REQUIRE(!seg.trace.rows.empty());
}

TEST_CASE("two-stage segmentation with K = 1 returns the mean level") {
  const int n = 16;
  Image clean = make_test_image(TestImageKind::squares, n, n);
  GridOperator A(make_identity_kernel(), n, n);
  RestorationModel m{A, clean, 1e7, 2.0, make_potential(PotentialKind::power, 0.5)};
  SolverConfig cfg;
  SegmentationResult seg = two_stage_segment(m, cfg, 1);
  REQUIRE(seg.centers.size() == 1);
  REQUIRE(seg.centers[0] == Catch::Approx(image_mean(seg.restored)).margin(1e-9));
  for (int lbl : seg.labels.labels) REQUIRE(lbl == 1);
  REQUIRE_THROWS_AS(two_stage_segment(m, cfg, 0), parameter_error);
}

TEST_CASE("lower-bound report on hand data") {
  // Constant image: no nonzero differences, vacuous pass.
  LowerBoundReport empty = lower_bound_report(constant_image(8, 8, 0.4), 1e-7);
  REQUIRE(empty.pass);
  REQUIRE(empty.nonzero_count == 0);
  REQUIRE(empty.counts.empty());

  // x=[[0,1],[0,1]]: four horizontal unit differences.
  Image x(2, 2);
  x.at(0, 1) = 1.0;
  x.at(1, 1) = 1.0;
  LowerBoundReport rep = lower_bound_report(x, 1e-7);
  REQUIRE(rep.nonzero_count == 4);
  REQUIRE(rep.theta_hat == 1.0);
  REQUIRE(rep.max_mag == 1.0);
  REQUIRE(rep.pass);
  REQUIRE(rep.gap_ratio == Catch::Approx(1e7));
  REQUIRE(rep.bin_edges.size() == 17);
  REQUIRE(rep.counts.size() == 16);
  REQUIRE(std::accumulate(rep.counts.begin(), rep.counts.end(), std::size_t{0}) == 4);

  // A sub-threshold difference fails the assertion.
  Image y(2, 2);
  y.at(0, 1) = 1e-9;
  y.at(1, 1) = 1e-9;
  LowerBoundReport fail = lower_bound_report(y, 1e-7);
  REQUIRE(!fail.pass);
  REQUIRE(fail.theta_hat == Catch::Approx(1e-9));

  REQUIRE_THROWS_AS(lower_bound_report(x, -1.0), parameter_error);
}

// Licensed under the Apache License 2.0 (see LICENSE file).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "ytx/csv.hpp"
#include "ytx/error.hpp"
#include "ytx/transforms_ctx.hpp"

using namespace ytx;
using doctest::Approx;
using Keys = std::vector<std::string>;

namespace {

RowContext keyed_subject(const Keys& k) { return RowContext{.subject = k}; }

Matrix column(const std::vector<double>& v) {
  Matrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

}  // namespace

TEST_CASE("subject centering subtracts the per-subject mean") {
  Keys s{"A", "A", "B"};
  std::vector<double> y{1, 3, 10};
  auto t = ctx::fit_subject_center(y, s);
  CHECK(t.forward(y, keyed_subject(s)) == std::vector<double>{-1, 1, 0});
  const auto& p = t.params_as<SubjectStats>();
  CHECK(p.count.at("A") == 2);
  CHECK(p.global_mean == Approx((2.0 * 2 + 10.0 * 1) / 3));

  Keys one{"A", "A", "A"};
  auto t1 = ctx::fit_subject_center(std::vector<double>{1, 2, 3}, one);
  CHECK(t1.forward(std::vector<double>{1, 2, 3}, keyed_subject(one)) == std::vector<double>{-1, 0, 1});
}

TEST_CASE("unseen subjects fall back to the global mean") {
  SubjectStats stats;
  stats.mean = {{"A", 2.0}, {"B", 6.0}};
  stats.count = {{"A", 1}, {"B", 1}};
  stats.global_mean = 4.0;
  FittedTransform t(TransformKind::subject_center, stats, {0.0, 10.0});
  Keys c{"C"};
  CHECK(t.forward(std::vector<double>{5}, keyed_subject(c))[0] == 1.0);
  CHECK(t.inverse(std::vector<double>{1}, keyed_subject(c))[0] == 5.0);
}

TEST_CASE("trial min-max scales each trial to the unit interval") {
  Keys tr{"T", "T", "T"};
  auto t = ctx::fit_trial_minmax(std::vector<double>{2, 4, 6}, tr);
  RowContext rc{.trial = tr};
  CHECK(t.forward(std::vector<double>{2, 4, 6}, rc) == std::vector<double>{0, 0.5, 1});

  Keys two{"a", "a", "b", "b"};
  std::vector<double> y{0, 10, 5, 15};
  auto t2 = ctx::fit_trial_minmax(y, two);
  RowContext rc2{.trial = two};
  CHECK(t2.forward(y, rc2) == std::vector<double>{0, 1, 0, 1});
  auto back = t2.inverse(t2.forward(y, rc2), rc2);
  CHECK(back == y);

  Keys flat{"K", "K"};
  CHECK_THROWS_WITH_AS(ctx::fit_trial_minmax(std::vector<double>{3, 3}, flat), doctest::Contains("constant trial"),
                       DataError);
  Keys unseen{"Z"};
  CHECK_THROWS_AS(t2.forward(std::vector<double>{1}, RowContext{.trial = unseen}), DomainError);
}

TEST_CASE("frame normalization divides by the reference") {
  std::vector<double> r{31, 1, 2};
  auto t = ctx::fit_frame_normalize(std::vector<double>{62, 5, 4}, r);
  RowContext rc{.frame = r};
  CHECK(t.forward(std::vector<double>{62, 5, 4}, rc) == std::vector<double>{2, 5, 2});
  CHECK(t.inverse(std::vector<double>{2, 5, 2}, rc) == std::vector<double>{62, 5, 4});
  std::vector<double> bad{1, 0};
  CHECK_THROWS_AS(ctx::fit_frame_normalize(std::vector<double>{1, 2}, bad), DomainError);
  try {
    t.forward(std::vector<double>{1, 1}, RowContext{.frame = bad});
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(e.index() == 1u);
  }
}

TEST_CASE("deflation rescales to base-period prices") {
  Keys time{"2020", "2021"};
  auto index = ctx::make_deflation_index(time, std::vector<double>{1.0, 1.1}, "2020");
  auto t = ctx::fit_deflate(std::vector<double>{100, 110}, time, index);
  RowContext rc{.time = time};
  auto z = t.forward(std::vector<double>{100, 110}, rc);
  CHECK(z[0] == 100.0);
  CHECK(z[1] == Approx(100.0));
  auto back = t.inverse(z, rc);
  CHECK(back[1] == Approx(110.0).epsilon(1e-15));

  Keys missing{"1999"};
  CHECK_THROWS_WITH_AS(t.forward(std::vector<double>{1}, RowContext{.time = missing}), doctest::Contains("1999"),
                       DomainError);
}

TEST_CASE("deflation index validation and base period default") {
  Keys time{"9", "10", "10"};
  auto index = ctx::make_deflation_index(time, std::vector<double>{1.0, 2.0, 2.0});
  CHECK(index.base_time == "10");  // numeric order, not lexicographic
  Keys conflict{"1", "1"};
  CHECK_THROWS_AS(ctx::make_deflation_index(conflict, std::vector<double>{1.0, 2.0}), DataError);
  Keys k{"a"};
  CHECK_THROWS(ctx::make_deflation_index(k, std::vector<double>{-1.0}));
  CHECK_THROWS(ctx::make_deflation_index(k, std::vector<double>{1.0}, "b"));
  CHECK(ctx::time_key_less("9", "10", true));
  CHECK_FALSE(ctx::time_key_less("9", "10", false));
}

TEST_CASE("deflation index loads from CSV") {
  const auto path = std::filesystem::temp_directory_path() / "ytx_cpi.csv";
  csv::write(path, csv::Table{{"year", "cpi"}, {{"2019", "0.9"}, {"2020", "1.0"}}});
  auto index = ctx::load_deflation_index(path);
  CHECK(index.series.at("2019") == 0.9);
  CHECK(index.base_time == "2020");
  std::filesystem::remove(path);
}

TEST_CASE("expectation normalization of an exactly linear target is zero") {
  std::vector<double> phi{1, 2, 3, 4, 5, 6};
  std::vector<double> y;
  for (double p : phi) y.push_back(2 * p + 1);
  const Matrix c = column(phi);
  auto t = ctx::fit_expectation_normalize(y, c);
  RowContext rc{.context = &c};
  for (double z : t.forward(y, rc)) CHECK(std::fabs(z) < 1e-6);
  auto back = t.inverse(t.forward(y, rc), rc);
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(back[i] == Approx(y[i]));
}

TEST_CASE("expectation normalization standardizes noisy linear data") {
  std::mt19937_64 rng(4);
  auto phi = oracle::normal_sample(rng, 2000);
  auto eps = oracle::normal_sample(rng, 2000);
  std::vector<double> y(2000);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = 2 * phi[i] + eps[i];
  const Matrix c = column(phi);
  auto t = ctx::fit_expectation_normalize(y, c);
  auto z = t.forward(y, RowContext{.context = &c});
  const double m = static_cast<double>(oracle::mean(z));
  double ss = 0;
  for (double v : z) ss += (v - m) * (v - m);
  const double sd = std::sqrt(ss / (z.size() - 1));
  CHECK(sd >= 0.8);
  CHECK(sd <= 1.25);
}

TEST_CASE("collinear context is rejected") {
  std::vector<double> y{1, 2, 3, 4};
  const Matrix c = column({5, 5, 5, 5});
  CHECK_THROWS_WITH_AS(ctx::fit_expectation_normalize(y, c), doctest::Contains("collinear context"), DataError);
  CHECK_THROWS_WITH_AS(ctx::fit_regression_normalize(y, c), doctest::Contains("collinear context"), DataError);
}

TEST_CASE("regression normalization divides by the fitted value") {
  std::vector<double> phi{1, 2, 3, 4, 5};
  std::vector<double> y;
  for (double p : phi) y.push_back(3 * p);
  const Matrix c = column(phi);
  auto t = ctx::fit_regression_normalize(y, c);
  for (double z : t.forward(y, RowContext{.context = &c})) CHECK(z == Approx(1.0).epsilon(1e-12));

  ContextModel m{.mode = ContextMode::regression_norm, .intercept = 1, .coefficients = {2}, .denom_floor = 1e-6};
  FittedTransform fixed(TransformKind::regression_norm, m, {0, 10});
  const Matrix two = column({2});
  CHECK(fixed.forward(std::vector<double>{10}, RowContext{.context = &two})[0] == 2.0);
  CHECK(fixed.inverse(std::vector<double>{2}, RowContext{.context = &two})[0] == 10.0);
}

TEST_CASE("regression normalization refuses a zero training denominator") {
  // Fitted line passes through zero at φ = 0.
  std::vector<double> phi{-2, -1, 0, 1, 2};
  std::vector<double> y{-4, -2, 0, 2, 4};
  const Matrix c = column(phi);
  CHECK_THROWS_WITH_AS(ctx::fit_regression_normalize(y, c), doctest::Contains("zero denominator"), DataError);
}

TEST_CASE("regression denominators are clamped at apply time") {
  ContextModel m{.mode = ContextMode::regression_norm, .intercept = 0, .coefficients = {1}, .denom_floor = 1e-3};
  bool clamped = false;
  const std::vector<double> phi{1e-9};
  CHECK(ctx::context_denominator(m, phi, &clamped) == 1e-3);
  CHECK(clamped);
  const std::vector<double> neg{-1e-9};
  CHECK(ctx::context_denominator(m, neg) == -1e-3);
}

TEST_CASE("fit_transform wires roles from the dataset") {
  auto table = csv::parse("s,x,y\na,1,1\na,2,3\nb,3,10\nb,4,12\n");
  auto d = build_dataset(table, ColumnRoles{.target = "y", .subject = "s"});
  auto t = fit_transform(TransformKind::subject_center, d);
  CHECK(t.forward(d.target, d.row_context()) == std::vector<double>{-1, 1, -1, 1});
  CHECK_THROWS_AS(fit_transform(TransformKind::trial_minmax, d), ConfigError);
  CHECK_THROWS_AS(fit_transform(TransformKind::deflate, d), ConfigError);
  CHECK_THROWS_AS(fit_transform(TransformKind::expectation_norm, d), ConfigError);
}

TEST_CASE("contextual transforms round-trip through fit_transform") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(1.0, 5.0);
  csv::Table table{{"subject", "trial", "year", "frame", "cpi", "phi", "y"}, {}};
  for (int i = 0; i < 60; ++i) {
    const double phi = u(rng);
    const int year = 2000 + i % 4;
    table.rows.push_back({std::string(1, static_cast<char>('a' + i % 3)), std::to_string(i % 5), std::to_string(year),
                          csv::format_number(u(rng)), csv::format_number(1.0 + 0.1 * (year - 2000)),
                          csv::format_number(phi), csv::format_number(4 * phi + u(rng))});
  }
  ColumnRoles roles{.target = "y", .subject = "subject", .time = "year", .frame = "frame", .trial = "trial",
                    .context = {"phi"}, .price_index = "cpi"};
  auto d = build_dataset(table, roles);
  for (auto kind : {TransformKind::subject_center, TransformKind::trial_minmax, TransformKind::frame,
                    TransformKind::deflate, TransformKind::expectation_norm, TransformKind::regression_norm}) {
    CAPTURE(to_string(kind));
    auto t = fit_transform(kind, d);
    auto back = t.inverse(t.forward(d.target, d.row_context()), d.row_context());
    for (std::size_t i = 0; i < d.rows(); ++i) CHECK(std::fabs(back[i] - d.target[i]) <= 1e-9 * std::max(1.0, std::fabs(d.target[i])));
  }
}

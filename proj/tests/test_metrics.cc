#include <doctest.h>

#include <sstream>

#include "tqd/metrics.h"
#include "test_util.h"

using namespace tqd;
using tqd_test::RandomImage;

namespace {

DirectionalField NormalizedRandomField(int rows, int cols,
                                       std::uint64_t seed) {
  DirectionalField f;
  for (int i = 0; i < kNumDirections; ++i) {
    f.values[i] = RandomImage(rows, cols, seed + 31 * i);
  }
  return Normalize(f);
}

}  // namespace

TEST_CASE("threshold schedule validation") {
  CHECK_NOTHROW(ThresholdSchedule::Default().Validate());
  CHECK(ThresholdSchedule::Default().gammas.front() == 0.01);
  ThresholdSchedule s;
  s.gammas = {0.02, 0.05};
  CHECK_THROWS_AS(s.Validate(), InvalidParameterError);
  s.gammas = {0.01, 0.3, 0.2};
  CHECK_THROWS_AS(s.Validate(), InvalidParameterError);
  s.gammas = {};
  CHECK_THROWS_AS(s.Validate(), InvalidParameterError);
  s.gammas = {0.01, 0.05};
  CHECK_NOTHROW(s.Validate());
}

TEST_CASE("detection counts use a strict threshold on normalized fields") {
  SUBCASE("gamma at the peak counts nothing") {
    const DirectionalField f = NormalizedRandomField(8, 8, 1);
    const auto counts = CountDetections(f, 1.0);
    for (int c : counts) CHECK(c == 0);
  }

  SUBCASE("uniform field counts every pixel") {
    DirectionalField f;
    for (auto& v : f.values) v = Image::Constant(4, 5, 0.5);
    f.values[0](0, 0) = 1.0;
    const auto counts = CountDetections(f, 0.4);
    CHECK(counts[0] == 20);
    CHECK(counts[1] == 20);
    CHECK(counts[2] == 20);
    CHECK(counts[3] == 20);
  }

  SUBCASE("hand-built field matches exhaustive enumeration") {
    DirectionalField f;
    for (int i = 0; i < kNumDirections; ++i) {
      f.values[i] = RandomImage(4, 4, 300 + i);
    }
    f.values[2](1, 2) = 1.0;  // pin the normalizer
    for (double gamma : {0.01, 0.25, 0.5, 0.9}) {
      const auto counts = CountDetections(f, gamma);
      for (int i = 0; i < kNumDirections; ++i) {
        int want = 0;
        for (int r = 0; r < 4; ++r) {
          for (int c = 0; c < 4; ++c) {
            if (f.values[i](r, c) > gamma) ++want;
          }
        }
        CHECK(counts[i] == want);
      }
    }
  }

  SUBCASE("unnormalized fields violate the contract") {
    DirectionalField f;
    for (auto& v : f.values) v = Image::Constant(2, 2, 2.0);
    CHECK_THROWS_AS(CountDetections(f, 0.5), ContractError);
  }

  SUBCASE("thresholds outside (0, 1] are rejected") {
    const DirectionalField f = NormalizedRandomField(4, 4, 2);
    CHECK_THROWS_AS(CountDetections(f, 0.0), InvalidParameterError);
    CHECK_THROWS_AS(CountDetections(f, 1.5), InvalidParameterError);
  }
}

TEST_CASE("detection rate follows the count ratio") {
  CHECK(*DetectionRate({90, 10, 10, 10}, Direction::kRight) ==
        doctest::Approx(0.75));
  CHECK(*DetectionRate({90, 10, 10, 10}, Direction::kUp) ==
        doctest::Approx(10.0 / 120.0));
  CHECK(!DetectionRate({0, 0, 0, 0}, Direction::kRight).has_value());
  for (int trial = 0; trial < 20; ++trial) {
    const DirectionalField f = NormalizedRandomField(6, 6, 900 + trial);
    const auto counts = CountDetections(f, 0.3);
    const auto dr = DetectionRate(counts, Direction::kLeft);
    if (dr) {
      CHECK(*dr >= 0.0);
      CHECK(*dr <= 1.0);
    }
  }
}

TEST_CASE("normalized points distribute mass over the schedule") {
  const auto np = NormalizedPoints({8, 2});
  CHECK(*np[0] == doctest::Approx(0.8));
  CHECK(*np[1] == doctest::Approx(0.2));
  CHECK(*NormalizedPoints({5})[0] == doctest::Approx(1.0));
  const auto undef = NormalizedPoints({0, 0, 0});
  for (const auto& v : undef) CHECK(!v.has_value());
  CHECK_THROWS_AS(NormalizedPoints({}), InvalidParameterError);
}

TEST_CASE("counts and normalized points are monotone in the threshold") {
  const ThresholdSchedule schedule = ThresholdSchedule::Default();
  for (int trial = 0; trial < 10; ++trial) {
    const DirectionalField f = NormalizedRandomField(10, 10, 40 + trial);
    const MetricsCell cell =
        EvaluateCell(f, schedule, Direction::kRight, 150, 840, "x");
    double np_sum = 0;
    for (size_t g = 1; g < schedule.gammas.size(); ++g) {
      for (int i = 0; i < kNumDirections; ++i) {
        CHECK(cell.counts[g][i] <= cell.counts[g - 1][i]);
      }
      if (cell.np[g]) CHECK(*cell.np[g] <= *cell.np[g - 1] + 1e-15);
    }
    for (const auto& v : cell.np) {
      if (v) np_sum += *v;
    }
    CHECK(np_sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("compare models on a drifting sequence") {
  StimulusSpec spec;
  spec.width = 48;
  spec.height = 32;
  spec.frame_count = 120;
  spec.sample_rate = 1000;
  spec.direction = Direction::kRight;
  spec.velocity = 150;
  spec.texture = TextureKind::kClutter;
  spec.seed = 9;
  const StimulusGenerator gen(spec);
  const SequenceView view = SequenceView::FromGenerator(gen);

  ModelConfig cfg = tqd_test::SmallConfig();
  cfg.boundary = Boundary::kToroidal;
  ThresholdSchedule schedule;
  schedule.gammas = {0.01, 0.05, 0.1, 0.2};

  SUBCASE("warm-up frames are rejected explicitly") {
    CHECK_THROWS_AS(CompareModels(view, cfg, schedule, 3), WarmupError);
    CHECK_THROWS_AS(CompareModels(view, cfg, schedule, 2000),
                    InvalidParameterError);
  }

  SUBCASE("report is deterministic and ordered") {
    const MetricsReport a = CompareModels(view, cfg, schedule, 100);
    const MetricsReport b = CompareModels(view, cfg, schedule, 100);
    std::ostringstream csv_a, csv_b, sum_a, sum_b;
    a.WriteCsv(csv_a);
    b.WriteCsv(csv_b);
    a.WriteSummary(sum_a);
    b.WriteSummary(sum_b);
    CHECK(csv_a.str() == csv_b.str());
    CHECK(sum_a.str() == sum_b.str());

    REQUIRE(a.cells.size() == 2);
    CHECK(a.cells[0].variant == Variant::kClassic);
    CHECK(a.cells[1].variant == Variant::kImproved);
    // header + gammas x directions x variants
    const size_t lines = 1 + schedule.gammas.size() * kNumDirections * 2;
    std::string line;
    size_t got = 0;
    std::istringstream parse(csv_a.str());
    while (std::getline(parse, line)) ++got;
    CHECK(got == lines);

    // The improved variant should not trail the classic one at gamma0.
    REQUIRE(a.cells[0].dr[0].has_value());
    REQUIRE(a.cells[1].dr[0].has_value());
    CHECK(*a.cells[1].dr[0] >= *a.cells[0].dr[0]);
    CHECK(sum_a.str().find("ordering.improved_ge_classic = true") !=
          std::string::npos);
  }
}

TEST_CASE("evaluate sequence matches the matching compare cell") {
  StimulusSpec spec;
  spec.width = 32;
  spec.height = 24;
  spec.frame_count = 100;
  spec.sample_rate = 1000;
  spec.direction = Direction::kUp;
  spec.velocity = 250;
  spec.texture = TextureKind::kBlocks;
  spec.seed = 4;
  const StimulusGenerator gen(spec);
  const SequenceView view = SequenceView::FromGenerator(gen);
  const ModelConfig cfg = tqd_test::SmallConfig();
  ThresholdSchedule schedule;
  schedule.gammas = {0.01, 0.1};

  const MetricsReport report = CompareModels(view, cfg, schedule, 90);
  const MetricsCell cell =
      EvaluateSequence(view, cfg, Variant::kImproved, schedule, 90,
                       Direction::kUp, "solo");
  CHECK(cell.counts == report.cells[1].counts);
  CHECK(cell.dr == report.cells[1].dr);
  CHECK(cell.np == report.cells[1].np);
}

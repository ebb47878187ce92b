#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "trifrac/calibration.hpp"

using namespace trifrac;

namespace {
const std::string kDataDir = std::string(TRIFRAC_SOURCE_DIR) + "/data";
}

TEST_CASE("kstar lookup interpolates the shipped table") {
  const KStarTable table = KStarTable::builtin();
  auto [k1, k2] = table.lookup(0.80, 15.0);
  CHECK(k1 == doctest::Approx(-0.88));
  CHECK(k2 == doctest::Approx(-2.52));
  std::tie(k1, k2) = table.lookup(0.775, 15.0);
  CHECK(k2 == doctest::Approx(-2.45));
  CHECK_THROWS_AS((void)table.lookup(0.60, 15.0), std::out_of_range);
  CHECK_THROWS_AS((void)table.lookup(0.80, 10.0), std::out_of_range);
}

TEST_CASE("kstar interpolation stays within monotone node ranges") {
  const KStarTable table = KStarTable::builtin();
  double prev = table.lookup(0.75, 15.0).second;
  for (double r = 0.751; r <= 0.85; r += 0.002) {
    const double k2 = table.lookup(r, 15.0).second;
    CHECK(k2 <= prev + 1e-12);  // K_II* decreases monotonically here
    prev = k2;
  }
}

TEST_CASE("mode II toughness from the failure load") {
  const double k = mode2_toughness(16.74, 0.80 * 47.0, 47.0, 20.0, -2.52);
  CHECK(k == doctest::Approx(0.15525).epsilon(1e-4));
  CHECK(k / kMpaSqrtM == doctest::Approx(4.91).epsilon(1e-3));
  CHECK(mode2_toughness(0.0, 37.6, 47.0, 20.0, -2.52) == 0.0);

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(0.5, 2.0);
  for (int i = 0; i < 50; ++i) {
    const double f = 10.0 * dist(rng), t = 15.0 * dist(rng), c = dist(rng);
    const double base = mode2_toughness(f, 37.6, 47.0, t, -2.52);
    CHECK(mode2_toughness(c * f, 37.6, 47.0, t, -2.52) ==
          doctest::Approx(c * base).epsilon(1e-13));
    CHECK(mode2_toughness(f, 37.6, 47.0, c * t, -2.52) ==
          doctest::Approx(base / c).epsilon(1e-13));
  }
}

TEST_CASE("fracture energy cross-checks the published cards") {
  CHECK(fracture_energy(4.79 * kMpaSqrtM, 45.8) ==
        doctest::Approx(5.01e-4).epsilon(1e-3));
  CHECK(fracture_energy(4.79 * kMpaSqrtM, 45.8) ==
        doctest::Approx(4.98e-4).epsilon(0.01));
  CHECK(fracture_energy(3.99 * kMpaSqrtM, 52.5) ==
        doctest::Approx(3.0366e-4).epsilon(0.0015));
  CHECK(fracture_energy(0.0, 45.8) == 0.0);
}

TEST_CASE("length scales from strengths") {
  CHECK(length_scale(3.928e-5, 52.5, 0.0109) == doctest::Approx(0.916).epsilon(5e-3));
  CHECK(length_scale(3.0366e-4, 52.5, 14.30 / 400.0) ==
        doctest::Approx(0.656).epsilon(5e-3));
  // algebraic inverse recovers the strength exactly
  const double l0 = length_scale(4.98e-4, 45.8, 0.04185);
  CHECK(std::sqrt(27.0 * 4.98e-4 * 45.8 / (512.0 * l0)) ==
        doctest::Approx(0.04185).epsilon(1e-12));
}

TEST_CASE("shear strength convention reproduces the shipped length scales") {
  CHECK(shear_strength(16.74, 20.0, 20.0) == doctest::Approx(0.04185));
  CHECK(length_scale(4.98e-4, 45.8, shear_strength(16.74, 20.0, 20.0)) ==
        doctest::Approx(0.682).epsilon(0.01));
  CHECK(shear_strength(14.30, 20.0, 20.0) == doctest::Approx(0.03575));
  CHECK(shear_strength(0.0, 20.0, 20.0) == 0.0);
}

TEST_CASE("unit conversion round trips") {
  for (double v : {0.1, 1.0, 4.79, 14.4}) {
    const double kn = v * kMpaSqrtM;
    CHECK(kn / kMpaSqrtM == doctest::Approx(v).epsilon(1e-12));
  }
}

TEST_CASE("csv reading") {
  const auto spk = read_records_file(kDataDir + "/spk_dnbd.csv");
  REQUIRE(spk.size() == 5);
  CHECK(spk[0].rock == "spk");
  CHECK(spk[0].failure_load == 16.63);
  CHECK(spk[0].notch_length == 37.1);
  CHECK(spk[0].ligament == 20.0);

  std::istringstream bad_header("a,b,c\nx,1,2");
  CHECK_THROWS(read_records_csv(bad_header));
  std::istringstream short_line(
      "rock,F_kN,a_mm,R_mm,t_mm,l_mm,angle_deg\nspk,1,2\n");
  CHECK_THROWS(read_records_csv(short_line));
  std::istringstream bad_number(
      "rock,F_kN,a_mm,R_mm,t_mm,l_mm,angle_deg\nspk,x,37,47,20,20,15\n");
  CHECK_THROWS(read_records_csv(bad_number));
}

TEST_CASE("calibration reproduces the spk column") {
  const auto records = read_records_file(kDataDir + "/spk_dnbd.csv");
  CalibrationInputs inputs;
  inputs.youngs = 45.8;
  inputs.poisson = 0.31;
  inputs.sigma_t = 14.4e-3;
  inputs.gc1 = 1.97e-5;
  const MaterialCard card =
      build_material_card(records, KStarTable::builtin(), inputs);
  CHECK(card.gc2 == doctest::Approx(4.98e-4).epsilon(0.01));
  CHECK(card.l02 == doctest::Approx(0.682).epsilon(0.01));
  // formula path for l0_I: differs from the published 0.259 by construction
  CHECK(card.l01 == doctest::Approx(0.2295).epsilon(5e-3));
  CHECK(card.l01 < 0.9 * 0.259);
  CHECK(card.tau == doctest::Approx(0.04185).epsilon(2e-3));
}

TEST_CASE("calibration reproduces the pfd column") {
  const auto records = read_records_file(kDataDir + "/pfd_dnbd.csv");
  CalibrationInputs inputs;
  inputs.youngs = 52.5;
  inputs.poisson = 0.27;
  inputs.sigma_t = 10.9e-3;
  inputs.gc1 = 3.928e-5;
  const MaterialCard card =
      build_material_card(records, KStarTable::builtin(), inputs);
  CHECK(card.gc2 == doctest::Approx(3.0366e-4).epsilon(0.005));
  CHECK(card.l01 == doctest::Approx(0.916).epsilon(0.005));
  CHECK(card.l02 == doctest::Approx(0.656).epsilon(0.01));
}

TEST_CASE("calibration edge cases") {
  CalibrationInputs inputs;
  inputs.youngs = 45.8;
  inputs.poisson = 0.31;
  inputs.sigma_t = 14.4e-3;
  inputs.gc1 = 1.97e-5;
  const KStarTable table = KStarTable::builtin();
  CHECK_THROWS(build_material_card({}, table, inputs));

  ExperimentRecord rec;
  rec.rock = "spk";
  rec.failure_load = 16.34;
  rec.notch_length = 37.7;
  rec.radius = 47.0;
  rec.thickness = 20.0;
  rec.ligament = 20.0;
  const std::vector<ExperimentRecord> one{rec};
  const MaterialCard card = build_material_card(one, table, inputs);
  const double k2 = mode2_toughness(rec.failure_load, rec.notch_length, rec.radius,
                                    rec.thickness,
                                    table.lookup(37.7 / 47.0, 15.0).second);
  CHECK(card.gc2 == doctest::Approx(fracture_energy(k2, 45.8)).epsilon(1e-12));

  ExperimentRecord other = rec;
  other.radius = 50.0;
  const std::vector<ExperimentRecord> mixed{rec, other};
  CHECK_THROWS(build_material_card(mixed, table, inputs));

  // determinism: identical batches produce identical bits
  const MaterialCard again = build_material_card(one, table, inputs);
  CHECK(card.gc2 == again.gc2);
  CHECK(card.l01 == again.l01);
  CHECK(card.l02 == again.l02);
}

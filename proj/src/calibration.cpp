#include "trifrac/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace trifrac {

KStarTable::KStarTable(std::vector<Row> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw std::invalid_argument("kstar table: no rows");
  std::sort(rows_.begin(), rows_.end(),
            [](const Row& a, const Row& b) { return a.a_over_r < b.a_over_r; });
  for (const Row& r : rows_)
    if (r.a_over_r <= 0.0 || r.a_over_r >= 1.0)
      throw std::invalid_argument("kstar table: a/R must be in (0, 1)");
}

KStarTable KStarTable::builtin() {
  return KStarTable({{0.75, 15.0, -0.94, -2.38},
                     {0.80, 15.0, -0.88, -2.52},
                     {0.85, 15.0, -0.88, -2.78}});
}

std::pair<double, double> KStarTable::lookup(double a_over_r,
                                             double angle_deg) const {
  std::vector<const Row*> at_angle;
  for (const Row& r : rows_)
    if (std::abs(r.angle_deg - angle_deg) < 1e-9) at_angle.push_back(&r);
  if (at_angle.empty())
    throw std::out_of_range("kstar lookup: angle not tabulated");
  if (a_over_r < at_angle.front()->a_over_r - 1e-12 ||
      a_over_r > at_angle.back()->a_over_r + 1e-12)
    throw std::out_of_range("kstar lookup: a/R outside the tabulated span");
  a_over_r = std::clamp(a_over_r, at_angle.front()->a_over_r,
                        at_angle.back()->a_over_r);
  for (size_t i = 0; i + 1 < at_angle.size(); ++i) {
    const Row& lo = *at_angle[i];
    const Row& hi = *at_angle[i + 1];
    if (a_over_r <= hi.a_over_r) {
      const double t = (a_over_r - lo.a_over_r) / (hi.a_over_r - lo.a_over_r);
      return {lo.k1 + t * (hi.k1 - lo.k1), lo.k2 + t * (hi.k2 - lo.k2)};
    }
  }
  return {at_angle.back()->k1, at_angle.back()->k2};
}

void ExperimentRecord::validate() const {
  if (failure_load < 0.0 || notch_length <= 0.0 || radius <= 0.0 ||
      thickness <= 0.0 || ligament <= 0.0)
    throw std::invalid_argument("experiment record: non-positive field");
  if (notch_length >= 2.0 * radius)
    throw std::invalid_argument("experiment record: notch exceeds the disk");
}

std::vector<ExperimentRecord> read_records_csv(std::istream& in) {
  std::vector<ExperimentRecord> records;
  std::string line;
  bool header = true;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      if (line != "rock,F_kN,a_mm,R_mm,t_mm,l_mm,angle_deg")
        throw std::runtime_error("records csv: unexpected header: " + line);
      header = false;
      continue;
    }
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 7)
      throw std::runtime_error("records csv: line " + std::to_string(lineno) +
                               ": expected 7 fields");
    ExperimentRecord rec;
    rec.rock = fields[0];
    try {
      rec.failure_load = std::stod(fields[1]);
      rec.notch_length = std::stod(fields[2]);
      rec.radius = std::stod(fields[3]);
      rec.thickness = std::stod(fields[4]);
      rec.ligament = std::stod(fields[5]);
      rec.angle_deg = std::stod(fields[6]);
    } catch (const std::exception&) {
      throw std::runtime_error("records csv: line " + std::to_string(lineno) +
                               ": bad number");
    }
    rec.validate();
    records.push_back(std::move(rec));
  }
  if (header) throw std::runtime_error("records csv: missing header");
  return records;
}

std::vector<ExperimentRecord> read_records_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open records file: " + path);
  return read_records_csv(in);
}

double mode2_toughness(double failure_load, double notch_length, double radius,
                       double thickness, double kstar2) {
  if (notch_length <= 0.0 || radius <= 0.0 || thickness <= 0.0)
    throw std::invalid_argument("mode2_toughness: geometry must be positive");
  return std::abs(kstar2) * failure_load * std::sqrt(M_PI * notch_length) /
         (M_PI * radius * thickness);
}

double fracture_energy(double toughness, double youngs) {
  if (youngs <= 0.0)
    throw std::invalid_argument("fracture_energy: E must be positive");
  return toughness * toughness / youngs;
}

double length_scale(double gc, double youngs, double strength) {
  if (strength <= 0.0)
    throw std::invalid_argument("length_scale: strength must be positive");
  return 27.0 * gc * youngs / (512.0 * strength * strength);
}

double shear_strength(double failure_load, double ligament, double thickness) {
  if (ligament <= 0.0 || thickness <= 0.0)
    throw std::invalid_argument("shear_strength: geometry must be positive");
  return failure_load / (ligament * thickness);
}

MaterialCard build_material_card(std::span<const ExperimentRecord> records,
                                 const KStarTable& table,
                                 const CalibrationInputs& inputs) {
  if (records.empty())
    throw std::invalid_argument("calibration: empty record batch");
  const double r0 = records.front().radius;
  const double ang0 = records.front().angle_deg;
  double k2_sum = 0.0, tau_sum = 0.0;
  for (const ExperimentRecord& rec : records) {
    rec.validate();
    if (std::abs(rec.radius - r0) > 1e-9 * r0 ||
        std::abs(rec.angle_deg - ang0) > 1e-9)
      throw std::invalid_argument(
          "calibration: records mix geometry families (R or angle differ)");
    const auto [k1s, k2s] = table.lookup(rec.notch_length / rec.radius,
                                         rec.angle_deg);
    (void)k1s;
    k2_sum += mode2_toughness(rec.failure_load, rec.notch_length, rec.radius,
                              rec.thickness, k2s);
    tau_sum += shear_strength(rec.failure_load, rec.ligament, rec.thickness);
  }
  const double k2 = k2_sum / static_cast<double>(records.size());
  const double tau = tau_sum / static_cast<double>(records.size());
  const double gc2 = fracture_energy(k2, inputs.youngs);
  const double l01 = length_scale(inputs.gc1, inputs.youngs, inputs.sigma_t);
  const double l02 = length_scale(gc2, inputs.youngs, tau);
  return MaterialCard::make(inputs.youngs, inputs.poisson, inputs.gc1, gc2, l01,
                            l02, inputs.eta, inputs.sigma_t, tau);
}

}  // namespace trifrac

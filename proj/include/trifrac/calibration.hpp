#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "trifrac/material.hpp"

namespace trifrac {

/// 1 MPa*sqrt(m) in kN*mm^(-3/2).
inline constexpr double kMpaSqrtM = 0.0316227766016838;

/// Normalized DNBD crack-tip parameters (K_I*, K_II*) tabulated over the
/// notch ratio a/R at fixed loading angles.
class KStarTable {
 public:
  struct Row {
    double a_over_r;
    double angle_deg;
    double k1, k2;
  };

  explicit KStarTable(std::vector<Row> rows);
  /// Rows shipped with the code: a/R in {0.75, 0.80, 0.85} at 15 degrees.
  static KStarTable builtin();

  /// Piecewise-linear interpolation in a/R at a tabulated angle. Throws
  /// std::out_of_range outside the tabulated span (no extrapolation).
  std::pair<double, double> lookup(double a_over_r, double angle_deg) const;

  const std::vector<Row>& rows() const { return rows_; }

 private:
  std::vector<Row> rows_;
};

struct ExperimentRecord {
  std::string rock;
  double failure_load = 0.0;  // kN
  double notch_length = 0.0;  // mm
  double radius = 0.0;        // mm
  double thickness = 0.0;     // mm
  double ligament = 0.0;      // mm
  double angle_deg = 15.0;

  void validate() const;
};

/// Reads `rock,F_kN,a_mm,R_mm,t_mm,l_mm,angle_deg` CSV records.
std::vector<ExperimentRecord> read_records_csv(std::istream& in);
std::vector<ExperimentRecord> read_records_file(const std::string& path);

/// Mode II toughness from the failure load: |K_II*| F sqrt(pi a) / (pi R t),
/// reported as a magnitude. Units: kN, mm -> kN*mm^(-3/2).
double mode2_toughness(double failure_load, double notch_length, double radius,
                       double thickness, double kstar2);

/// G_c = K^2 / E.
double fracture_energy(double toughness, double youngs);

/// l0 = 27 Gc E / (512 strength^2).
double length_scale(double gc, double youngs, double strength);

/// Average shear stress over the ligament cross-section at failure.
double shear_strength(double failure_load, double ligament, double thickness);

/// Externally supplied per-rock inputs that the DNBD records cannot provide.
struct CalibrationInputs {
  double youngs = 0.0;   // kN/mm^2
  double poisson = 0.0;
  double sigma_t = 0.0;  // kN/mm^2
  double gc1 = 0.0;      // kN/mm (mode I, from literature)
  double eta = 1e-6;
};

/// Full calibration pipeline: averages per-record K_II, derives G_cII and
/// the shear strength, and computes both length scales from the strength
/// relations. Throws on an empty batch or inconsistent record geometry.
MaterialCard build_material_card(std::span<const ExperimentRecord> records,
                                 const KStarTable& table,
                                 const CalibrationInputs& inputs);

}  // namespace trifrac

#include "trifrac/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace trifrac {

namespace {

enum class KeyType { kNumber, kInteger, kBool, kText };

struct KeySpec {
  const char* key;
  KeyType type;
  const char* preset;  // default value; "" means unset unless required later
  const char* doc;
};

// Schema in serialization order.
const std::vector<KeySpec>& schema() {
  static const std::vector<KeySpec> s = {
      {"geometry.kind", KeyType::kText, "", "dnbd | csg (required)"},
      {"geometry.radius_mm", KeyType::kNumber, "47", "disk radius R"},
      {"geometry.notch_top_mm", KeyType::kNumber, "37.5", "top notch length a_t"},
      {"geometry.notch_bottom_mm", KeyType::kNumber, "37.5", "bottom notch length a_b"},
      {"geometry.notch_width_mm", KeyType::kNumber, "1.1", "notch width w"},
      {"geometry.notch_offset_mm", KeyType::kNumber, "0", "perpendicular notch pair offset"},
      {"geometry.load_angle_deg", KeyType::kNumber, "15", "angle between notch line and load axis"},
      {"geometry.arc_length_mm", KeyType::kNumber, "10", "loading arc length on the rim"},
      {"geometry.thickness_mm", KeyType::kNumber, "20", "specimen thickness (force reporting)"},
      {"geometry.csg", KeyType::kText, "", "CSG expression, required when kind = csg"},
      {"mesh.nx", KeyType::kInteger, "25", "elements in x (before refine)"},
      {"mesh.ny", KeyType::kInteger, "25", "elements in y (before refine)"},
      {"mesh.p", KeyType::kInteger, "3", "polynomial degree, 1..4"},
      {"mesh.refine", KeyType::kInteger, "1", "uniform refinement factor"},
      {"mesh.padding_mm", KeyType::kNumber, "0", "embedding box padding around the shape"},
      {"mesh.quad_depth", KeyType::kInteger, "3", "quadtree partitioning depth"},
      {"mesh.quad_points", KeyType::kInteger, "0", "Gauss points per direction per leaf (0: p+1)"},
      {"material.preset", KeyType::kText, "", "spk | pfd; explicit keys override"},
      {"material.e_gpa", KeyType::kNumber, "", "Young's modulus (GPa = kN/mm^2)"},
      {"material.nu", KeyType::kNumber, "", "Poisson ratio"},
      {"material.sigma_t_mpa", KeyType::kNumber, "", "tensile strength (MPa)"},
      {"material.tau_mpa", KeyType::kNumber, "", "shear strength (MPa)"},
      {"material.gc_i_kn_mm", KeyType::kNumber, "", "mode I fracture energy (kN/mm)"},
      {"material.gc_ii_kn_mm", KeyType::kNumber, "", "mode II fracture energy (kN/mm)"},
      {"material.l0_i_mm", KeyType::kNumber, "", "mode I length scale (mm)"},
      {"material.l0_ii_mm", KeyType::kNumber, "", "mode II length scale (mm)"},
      {"material.eta", KeyType::kNumber, "1e-6", "residual stiffness"},
      {"solver.tolerance", KeyType::kNumber, "1e-5", "staggered stopping tolerance"},
      {"solver.beta", KeyType::kNumber, "1e6", "Dirichlet penalty"},
      {"solver.alpha_fict", KeyType::kNumber, "1e-8", "fictitious-domain indicator value"},
      {"solver.kappa", KeyType::kNumber, "1.1", "step controller exponent"},
      {"solver.u_init_mm", KeyType::kNumber, "5e-3", "initial and maximum step size"},
      {"solver.u_min_mm", KeyType::kNumber, "5e-4", "minimum step size"},
      {"solver.max_staggered", KeyType::kInteger, "500", "staggered iteration cap"},
      {"solver.on_nonconvergence", KeyType::kText, "warn", "warn | abort"},
      {"solver.step_error_source", KeyType::kText, "final_residual",
       "final_residual | first_residual"},
      {"solver.target_displacement_mm", KeyType::kNumber, "0.12", "applied displacement target"},
      {"solver.failure_fraction", KeyType::kNumber, "0.01",
       "stop when force falls below this fraction of the peak"},
      {"output.dir", KeyType::kText, "out", "output directory"},
      {"output.snapshot_every", KeyType::kInteger, "0",
       "snapshot cadence in steps (0: final only)"},
      {"output.viz_samples", KeyType::kInteger, "2", "viz samples per element per direction"},
      {"output.write_curve", KeyType::kBool, "true", "write curve.csv"},
      {"output.write_snapshots", KeyType::kBool, "true", "write VTK snapshots"},
  };
  return s;
}

const KeySpec* find_spec(const std::string& key) {
  for (const KeySpec& s : schema())
    if (key == s.key) return &s;
  return nullptr;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  size_t e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw SchemaError(key, "not a number: '" + value + "'");
  }
}

int parse_integer(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw SchemaError(key, "not an integer: '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw SchemaError(key, "expected true or false, got '" + value + "'");
}

std::string format_number(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

SimulationConfig SimulationConfig::parse(const std::string& text) {
  SimulationConfig config;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw SchemaError("line " + std::to_string(lineno), "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw SchemaError("line " + std::to_string(lineno), "expected key = value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.find('.') == std::string::npos) {
      if (section.empty())
        throw SchemaError(key, "key outside any section");
      key = section + "." + key;
    }
    const KeySpec* spec = find_spec(key);
    if (spec == nullptr) throw SchemaError(key, "unknown key");
    if (config.values_.count(key))
      throw SchemaError(key, "duplicate key");
    config.values_[key] = value;
  }

  // Required root key first: everything else has defaults.
  if (!config.values_.count("geometry.kind"))
    throw SchemaError("geometry.kind", "geometry block required (dnbd or csg)");

  // Preset-based material defaults.
  const auto preset_it = config.values_.find("material.preset");
  if (preset_it != config.values_.end() && !preset_it->second.empty()) {
    MaterialCard card;
    try {
      card = MaterialCard::preset(preset_it->second);
    } catch (const std::exception& e) {
      throw SchemaError("material.preset", e.what());
    }
    auto fill = [&](const char* key, double v) {
      if (!config.values_.count(key)) config.values_[key] = format_number(v);
    };
    fill("material.e_gpa", card.youngs);
    fill("material.nu", card.poisson);
    fill("material.sigma_t_mpa", card.sigma_t * 1e3);
    fill("material.tau_mpa", card.tau * 1e3);
    fill("material.gc_i_kn_mm", card.gc1);
    fill("material.gc_ii_kn_mm", card.gc2);
    fill("material.l0_i_mm", card.l01);
    fill("material.l0_ii_mm", card.l02);
    fill("material.eta", card.eta);
  }

  // Static defaults.
  for (const KeySpec& s : schema())
    if (!config.values_.count(s.key) && s.preset[0] != '\0')
      config.values_[s.key] = s.preset;

  // Type validation for everything present.
  for (const auto& [key, value] : config.values_) {
    const KeySpec* spec = find_spec(key);
    switch (spec->type) {
      case KeyType::kNumber:
        parse_number(key, value);
        break;
      case KeyType::kInteger:
        parse_integer(key, value);
        break;
      case KeyType::kBool:
        parse_bool(key, value);
        break;
      case KeyType::kText:
        break;
    }
  }

  // Contextual validation.
  const std::string& kind = config.values_["geometry.kind"];
  if (kind != "dnbd" && kind != "csg")
    throw SchemaError("geometry.kind", "must be dnbd or csg, got '" + kind + "'");
  if (kind == "csg") {
    if (!config.values_.count("geometry.csg") || config.values_["geometry.csg"].empty())
      throw SchemaError("geometry.csg", "required when geometry.kind = csg");
    parse_csg(config.values_["geometry.csg"]);  // validates the expression
  } else {
    try {
      config.dnbd().validate();
    } catch (const std::exception& e) {
      throw SchemaError("geometry", e.what());
    }
  }
  const int p = config.integer("mesh.p");
  if (p < kMinDegree || p > kMaxDegree)
    throw SchemaError("mesh.p", "supported degrees are 1..4");
  if (config.integer("mesh.nx") < 1 || config.integer("mesh.ny") < 1)
    throw SchemaError("mesh.nx", "element counts must be >= 1");
  if (config.integer("mesh.refine") < 1)
    throw SchemaError("mesh.refine", "refinement factor must be >= 1");
  if (config.integer("mesh.quad_depth") < 0)
    throw SchemaError("mesh.quad_depth", "depth must be >= 0");
  if (config.number("solver.tolerance") <= 0.0)
    throw SchemaError("solver.tolerance", "must be positive");
  if (config.number("solver.alpha_fict") <= 0.0)
    throw SchemaError("solver.alpha_fict", "must be positive");
  if (config.integer("solver.max_staggered") < 1)
    throw SchemaError("solver.max_staggered", "must be >= 1");
  const std::string& policy = config.values_["solver.on_nonconvergence"];
  if (policy != "warn" && policy != "abort")
    throw SchemaError("solver.on_nonconvergence", "must be warn or abort");
  const std::string& src = config.values_["solver.step_error_source"];
  if (src != "final_residual" && src != "first_residual")
    throw SchemaError("solver.step_error_source",
                      "must be final_residual or first_residual");
  const double umin = config.number("solver.u_min_mm");
  const double uinit = config.number("solver.u_init_mm");
  if (umin <= 0.0 || uinit < umin)
    throw SchemaError("solver.u_init_mm", "need 0 < u_min_mm <= u_init_mm");
  if (config.integer("output.viz_samples") < 1)
    throw SchemaError("output.viz_samples", "must be >= 1");

  // Material completeness (preset already merged above).
  const char* needed[] = {"material.e_gpa", "material.nu", "material.gc_i_kn_mm",
                          "material.gc_ii_kn_mm", "material.l0_i_mm",
                          "material.l0_ii_mm"};
  for (const char* key : needed)
    if (!config.values_.count(key))
      throw SchemaError(key, "required (set a preset or the full card)");
  config.make_material();  // range checks

  return config;
}

SimulationConfig SimulationConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string SimulationConfig::serialize() const {
  std::string out;
  std::string section;
  for (const KeySpec& s : schema()) {
    const auto it = values_.find(s.key);
    if (it == values_.end()) continue;
    const std::string key(s.key);
    const size_t dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      if (!out.empty()) out += "\n";
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += key.substr(dot + 1) + " = " + it->second + "\n";
  }
  return out;
}

std::uint64_t SimulationConfig::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (const char c : serialize()) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

const std::string& SimulationConfig::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw SchemaError(key, "key not set");
  return it->second;
}

double SimulationConfig::number(const std::string& key) const {
  return parse_number(key, text(key));
}

int SimulationConfig::integer(const std::string& key) const {
  return parse_integer(key, text(key));
}

bool SimulationConfig::boolean(const std::string& key) const {
  return parse_bool(key, text(key));
}

DnbdGeometry SimulationConfig::dnbd() const {
  if (text("geometry.kind") != "dnbd")
    throw SchemaError("geometry.kind", "not a dnbd geometry");
  DnbdGeometry g;
  g.radius = number("geometry.radius_mm");
  g.notch_top = number("geometry.notch_top_mm");
  g.notch_bottom = number("geometry.notch_bottom_mm");
  g.notch_width = number("geometry.notch_width_mm");
  g.notch_offset = number("geometry.notch_offset_mm");
  g.load_angle_deg = number("geometry.load_angle_deg");
  g.arc_length = number("geometry.arc_length_mm");
  g.thickness = number("geometry.thickness_mm");
  return g;
}

ImplicitShape SimulationConfig::make_shape() const {
  if (text("geometry.kind") == "dnbd") return build_dnbd(dnbd());
  return parse_csg(text("geometry.csg"));
}

EmbeddingMesh SimulationConfig::make_mesh() const {
  const ImplicitShape shape = make_shape();
  Box2 box = shape.bounding_box();
  const double pad = number("mesh.padding_mm");
  box.min() -= Vec2::Constant(pad);
  box.max() += Vec2::Constant(pad);
  EmbeddingMesh mesh;
  const int refine = integer("mesh.refine");
  mesh.nx = integer("mesh.nx") * refine;
  mesh.ny = integer("mesh.ny") * refine;
  mesh.degree = integer("mesh.p");
  mesh.origin = box.min();
  mesh.hx = box.sizes().x() / mesh.nx;
  mesh.hy = box.sizes().y() / mesh.ny;
  mesh.validate();
  return mesh;
}

MaterialCard SimulationConfig::make_material() const {
  const double sigma_t =
      values_.count("material.sigma_t_mpa") ? number("material.sigma_t_mpa") * 1e-3 : 0.0;
  const double tau =
      values_.count("material.tau_mpa") ? number("material.tau_mpa") * 1e-3 : 0.0;
  try {
    return MaterialCard::make(number("material.e_gpa"), number("material.nu"),
                              number("material.gc_i_kn_mm"),
                              number("material.gc_ii_kn_mm"),
                              number("material.l0_i_mm"), number("material.l0_ii_mm"),
                              number("material.eta"), sigma_t, tau);
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaError("material", e.what());
  }
}

FcmOptions SimulationConfig::make_fcm() const {
  FcmOptions fcm;
  fcm.depth = integer("mesh.quad_depth");
  fcm.points_per_dir = integer("mesh.quad_points");
  fcm.alpha_fict = number("solver.alpha_fict");
  return fcm;
}

StaggeredOptions SimulationConfig::make_staggered() const {
  StaggeredOptions opts;
  opts.tolerance = number("solver.tolerance");
  opts.max_iterations = integer("solver.max_staggered");
  opts.abort_on_nonconvergence = text("solver.on_nonconvergence") == "abort";
  return opts;
}

LoadStepOptions SimulationConfig::make_stepping() const {
  LoadStepOptions opts;
  opts.u_init = number("solver.u_init_mm");
  opts.u_min = number("solver.u_min_mm");
  opts.kappa = number("solver.kappa");
  opts.use_first_residual = text("solver.step_error_source") == "first_residual";
  return opts;
}

SimulationSetup SimulationConfig::make_setup() const {
  if (text("geometry.kind") != "dnbd")
    throw SchemaError("geometry.kind",
                      "run requires a dnbd geometry (loading arcs live on the rim)");
  const DnbdGeometry geom = dnbd();
  SimulationSetup setup(make_mesh(), make_shape(), make_material());
  setup.fcm = make_fcm();
  setup.stagger = make_staggered();
  setup.stepping = make_stepping();
  setup.arcs = make_dnbd_arcs(geom, number("solver.beta"));
  setup.target_displacement = number("solver.target_displacement_mm");
  setup.failure_fraction = number("solver.failure_fraction");
  setup.thickness = geom.thickness;
  return setup;
}

std::string SimulationConfig::schema_help() {
  std::string out = "configuration keys (key = default  # description):\n";
  std::string section;
  for (const KeySpec& s : schema()) {
    const std::string key(s.key);
    const std::string sec = key.substr(0, key.find('.'));
    if (sec != section) {
      out += "\n[" + sec + "]\n";
      section = sec;
    }
    out += "  " + key.substr(key.find('.') + 1);
    if (s.preset[0] != '\0') out += std::string(" = ") + s.preset;
    out += std::string("  # ") + s.doc + "\n";
  }
  return out;
}

namespace {

struct CsgParser {
  const std::string& text;
  size_t pos = 0;

  void skip() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool consume(char c) {
    skip();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!consume(c))
      throw SchemaError("geometry.csg", std::string("expected '") + c + "' at offset " +
                                            std::to_string(pos));
  }
  std::string ident() {
    skip();
    size_t b = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (b == pos) throw SchemaError("geometry.csg", "expected a name at offset " +
                                                        std::to_string(pos));
    return text.substr(b, pos - b);
  }
  double num() {
    skip();
    size_t consumed = 0;
    double v = 0.0;
    try {
      v = std::stod(text.substr(pos), &consumed);
    } catch (const std::exception&) {
      throw SchemaError("geometry.csg", "expected a number at offset " +
                                            std::to_string(pos));
    }
    pos += consumed;
    return v;
  }
  ImplicitShape expr() {
    const std::string name = ident();
    expect('(');
    ImplicitShape result = [&]() -> ImplicitShape {
      if (name == "disk") {
        const double cx = num();
        expect(',');
        const double cy = num();
        expect(',');
        const double r = num();
        return ImplicitShape::disk(Vec2(cx, cy), r);
      }
      if (name == "capsule") {
        double v[5];
        for (int i = 0; i < 5; ++i) {
          if (i) expect(',');
          v[i] = num();
        }
        return ImplicitShape::capsule(Vec2(v[0], v[1]), Vec2(v[2], v[3]), v[4]);
      }
      if (name == "halfplane") {
        double v[4];
        for (int i = 0; i < 4; ++i) {
          if (i) expect(',');
          v[i] = num();
        }
        return ImplicitShape::half_plane(Vec2(v[0], v[1]), Vec2(v[2], v[3]));
      }
      if (name == "union" || name == "intersection" || name == "difference") {
        ImplicitShape a = expr();
        expect(',');
        ImplicitShape b = expr();
        if (name == "union") return ImplicitShape::union_of(a, b);
        if (name == "intersection") return ImplicitShape::intersection_of(a, b);
        return ImplicitShape::difference_of(a, b);
      }
      throw SchemaError("geometry.csg", "unknown primitive '" + name + "'");
    }();
    expect(')');
    return result;
  }
};

}  // namespace

ImplicitShape parse_csg(const std::string& text) {
  CsgParser parser{text};
  ImplicitShape shape = parser.expr();
  parser.skip();
  if (parser.pos != text.size())
    throw SchemaError("geometry.csg", "trailing characters after expression");
  return shape;
}

}  // namespace trifrac

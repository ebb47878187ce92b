#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "trifrac/assembly.hpp"
#include "trifrac/geometry.hpp"
#include "trifrac/material.hpp"
#include "trifrac/solver.hpp"

namespace trifrac {

class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& key, const std::string& reason)
      : std::runtime_error("config: " + key + ": " + reason),
        key(key),
        reason(reason) {}
  std::string key, reason;
};

/// Flat sectioned key-value configuration. Sections are `[name]` headers or
/// dotted keys; unknown keys are errors; all defaults are filled at parse
/// time so a parsed config serializes to its full normal form.
class SimulationConfig {
 public:
  static SimulationConfig parse(const std::string& text);
  static SimulationConfig load(const std::string& path);

  /// Normal form: fixed section and key order, every key present.
  std::string serialize() const;
  /// FNV-1a of the normal form.
  std::uint64_t hash() const;

  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  bool boolean(const std::string& key) const;
  const std::string& text(const std::string& key) const;

  bool operator==(const SimulationConfig& other) const {
    return values_ == other.values_;
  }

  DnbdGeometry dnbd() const;
  ImplicitShape make_shape() const;
  EmbeddingMesh make_mesh() const;
  MaterialCard make_material() const;
  FcmOptions make_fcm() const;
  StaggeredOptions make_staggered() const;
  LoadStepOptions make_stepping() const;
  /// Full run setup; requires geometry.kind = dnbd (the loading arcs live on
  /// the disk rim).
  SimulationSetup make_setup() const;

  static std::string schema_help();

 private:
  std::map<std::string, std::string> values_;
};

/// CSG expression: disk(cx,cy,r), capsule(ax,ay,bx,by,halfwidth),
/// halfplane(px,py,nx,ny), union(e,e), intersection(e,e), difference(e,e).
ImplicitShape parse_csg(const std::string& text);

}  // namespace trifrac

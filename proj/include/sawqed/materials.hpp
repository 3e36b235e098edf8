#ifndef SAWQED_MATERIALS_HPP
#define SAWQED_MATERIALS_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sawqed {

/// Constants for one substrate material. All values are SI internally;
/// the JSON catalog file uses 10^10 N/m^2 for the elastic constants and
/// the loader converts (see load_catalog).
struct MaterialRecord {
  std::string name;

  // Cubic elastic constants [N/m^2]. Absent for the piezomagnetic
  // estimate-only entries, whose sources quote no elastic tensor.
  std::optional<double> c11, c12, c44;

  double density = 0.0;  // [kg/m^3]

  // Piezoelectric coupling [C/m^2]. e14 is the representative constant
  // (the single independent one for cubic crystals); e_min/e_max bound
  // the non-zero tensor elements for anisotropic materials and default
  // to e14.
  std::optional<double> e14;
  std::optional<double> e_min, e_max;

  // Relative permittivity (min, max); cubic materials store min == max.
  std::optional<std::pair<double, double>> eps_rel;

  std::optional<double> h15;             // piezomagnetic constant [T/strain]
  std::optional<double> shear_velocity;  // catalog phase velocity [m/s];
                                         // used when the cubic Rayleigh
                                         // solver does not apply

  std::optional<double> mirror_C1, mirror_C2;  // single-groove reflection
  std::optional<double> bulk_Cb;               // bulk-conversion coefficient
  double qm_f_product = 1e5;  // material-loss bound, Q_m * f[GHz]

  bool estimate_only = false;

  bool has_elastic() const { return c11 && c12 && c44; }

  /// Throws std::invalid_argument naming the offending field and record.
  void validate() const;
};

/// Built-in records: GaAs, AlGaAs (x=0.3), diamond, LiNbO3, Quartz,
/// Terfenol-D, CoFe2O4.
std::vector<MaterialRecord> builtin_catalog();

/// Parse a JSON catalog (top-level array of records, catalog-file units).
/// Unknown fields are rejected. Throws std::runtime_error with context.
std::vector<MaterialRecord> parse_catalog(const std::string& json_text);

/// Load a user catalog file and merge it over the built-ins
/// (user records shadow built-ins by name). All invariants validated.
std::vector<MaterialRecord> load_catalog(const std::string& path);

/// Merge: user records shadow base records by name, new names append.
std::vector<MaterialRecord> merge_catalog(std::vector<MaterialRecord> base,
                                          const std::vector<MaterialRecord>& user);

/// Exact-name, case-sensitive lookup. Throws std::out_of_range listing
/// the available names on a miss.
const MaterialRecord& get(const std::vector<MaterialRecord>& catalog,
                          const std::string& name);

/// Serialize in the catalog-file schema and units (round-trips exactly).
std::string serialize_catalog(const std::vector<MaterialRecord>& catalog);

}  // namespace sawqed

#endif

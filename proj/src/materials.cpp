#include "sawqed/materials.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace sawqed {

namespace {
constexpr double kElasticUnit = 1e10;  // catalog files quote 10^10 N/m^2

void fail(const std::string& record, const std::string& field, const std::string& why) {
  throw std::invalid_argument("material '" + record + "': " + field + " " + why);
}
}  // namespace

void MaterialRecord::validate() const {
  if (name.empty()) fail("<unnamed>", "name", "must be non-empty");
  if (!(density > 0)) fail(name, "density", "must be > 0");
  if (c11 || c12 || c44) {
    if (!has_elastic()) fail(name, "c11/c12/c44", "must be given together");
    if (!(*c44 > 0)) fail(name, "c44", "must be > 0");
    if (!(*c11 > std::abs(*c12))) fail(name, "c11", "must exceed |c12| (elastic stability)");
  }
  if (eps_rel) {
    if (!(eps_rel->first >= 1.0) || !(eps_rel->second >= eps_rel->first))
      fail(name, "eps_rel", "must satisfy 1 <= min <= max");
  }
  if (h15 && !(*h15 >= 0)) fail(name, "h15", "must be >= 0");
  if (e14 && !(*e14 >= 0)) fail(name, "e14", "must be >= 0");
  if (e_min || e_max) {
    if (!e_min || !e_max || !(*e_min >= 0) || !(*e_max >= *e_min))
      fail(name, "e_min/e_max", "must satisfy 0 <= e_min <= e_max");
  }
  if (shear_velocity && !(*shear_velocity > 0)) fail(name, "shear_velocity", "must be > 0");
  if (!(qm_f_product > 0)) fail(name, "qm_f_product", "must be > 0");
}

std::vector<MaterialRecord> builtin_catalog() {
  std::vector<MaterialRecord> cat;

  {
    MaterialRecord m;
    m.name = "GaAs";
    // c44 carries a fourth digit so the [110] Rayleigh solve lands on the
    // tabulated 2878 m/s.
    m.c11 = 12.26e10;
    m.c12 = 5.71e10;
    m.c44 = 5.99e10;
    m.density = 5307;
    m.e14 = 0.157;
    m.eps_rel = {10.99, 10.99};
    cat.push_back(m);
  }
  {
    MaterialRecord m;
    m.name = "AlGaAs";  // Al_0.3 Ga_0.7 As
    m.c11 = 12.428e10;
    m.c12 = 5.763e10;
    m.c44 = 5.966e10;
    m.density = 4864;
    m.e14 = 0.145;
    m.eps_rel = {12.0, 12.0};
    cat.push_back(m);
  }
  {
    MaterialRecord m;
    m.name = "diamond";
    m.c11 = 107.9e10;
    m.c12 = 12.4e10;
    m.c44 = 57.8e10;
    m.density = 3515;
    m.e14 = 0.0;  // not piezoelectric
    m.eps_rel = {5.7, 5.7};
    cat.push_back(m);
  }
  {
    MaterialRecord m;
    m.name = "LiNbO3";  // Y-Z cut
    m.c11 = 20.3e10;
    m.c12 = 5.3e10;
    m.c44 = 6.0e10;
    m.density = 4650;
    m.e14 = 3.7;
    m.e_min = 0.2;
    m.e_max = 3.7;
    m.eps_rel = {29.0, 44.0};
    m.shear_velocity = 3488;
    m.mirror_C1 = 0.67;
    m.mirror_C2 = 42.0;
    m.bulk_Cb = 8.7;
    cat.push_back(m);
  }
  {
    MaterialRecord m;
    m.name = "Quartz";  // ST cut
    m.c11 = 8.67e10;
    m.c12 = 0.70e10;
    m.c44 = 5.79e10;
    // density chosen so k*U0 reproduces the tabulated zero-point strain
    // 17.3e-9 at the ST-cut velocity
    m.density = 2200;
    m.e14 = 0.171;
    m.e_min = 0.0406;
    m.e_max = 0.171;
    m.eps_rel = {4.43, 4.63};
    m.shear_velocity = 3158;
    m.bulk_Cb = 10.0;
    cat.push_back(m);
  }
  {
    MaterialRecord m;
    m.name = "Terfenol-D";
    m.density = 9250;
    m.h15 = 167;
    m.shear_velocity = 1190;
    m.estimate_only = true;
    cat.push_back(m);
  }
  {
    MaterialRecord m;
    m.name = "CoFe2O4";
    m.density = 5300;
    m.h15 = 550;
    m.shear_velocity = 3020;
    m.estimate_only = true;
    cat.push_back(m);
  }

  for (const auto& m : cat) m.validate();
  return cat;
}

namespace {

using nlohmann::json;

const std::set<std::string> kKnownFields = {
    "name", "c11", "c12", "c44", "density", "e14", "e_min", "e_max",
    "eps_rel", "h15", "shear_velocity", "mirror_C1", "mirror_C2",
    "bulk_Cb", "qm_f_product", "estimate_only"};

std::optional<double> opt_num(const json& j, const std::string& key, double scale = 1.0) {
  if (!j.contains(key)) return std::nullopt;
  if (!j[key].is_number())
    throw std::runtime_error("field '" + key + "' must be a number");
  return j[key].get<double>() * scale;
}

MaterialRecord record_from_json(const json& j, size_t index) {
  if (!j.is_object())
    throw std::runtime_error("catalog entry " + std::to_string(index) + " is not an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!kKnownFields.count(it.key()))
      throw std::runtime_error("catalog entry " + std::to_string(index) +
                               ": unknown field '" + it.key() + "'");
  }
  MaterialRecord m;
  if (!j.contains("name") || !j["name"].is_string())
    throw std::runtime_error("catalog entry " + std::to_string(index) + ": missing string 'name'");
  m.name = j["name"].get<std::string>();
  m.c11 = opt_num(j, "c11", kElasticUnit);
  m.c12 = opt_num(j, "c12", kElasticUnit);
  m.c44 = opt_num(j, "c44", kElasticUnit);
  if (auto d = opt_num(j, "density")) m.density = *d;
  m.e14 = opt_num(j, "e14");
  m.e_min = opt_num(j, "e_min");
  m.e_max = opt_num(j, "e_max");
  if (j.contains("eps_rel")) {
    const auto& e = j["eps_rel"];
    if (e.is_number()) {
      double v = e.get<double>();
      m.eps_rel = {v, v};
    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      m.eps_rel = {e[0].get<double>(), e[1].get<double>()};
    } else {
      throw std::runtime_error("field 'eps_rel' must be a number or [min,max]");
    }
  }
  m.h15 = opt_num(j, "h15");
  m.shear_velocity = opt_num(j, "shear_velocity");
  m.mirror_C1 = opt_num(j, "mirror_C1");
  m.mirror_C2 = opt_num(j, "mirror_C2");
  m.bulk_Cb = opt_num(j, "bulk_Cb");
  if (auto q = opt_num(j, "qm_f_product")) m.qm_f_product = *q;
  if (j.contains("estimate_only")) {
    if (!j["estimate_only"].is_boolean())
      throw std::runtime_error("field 'estimate_only' must be a boolean");
    m.estimate_only = j["estimate_only"].get<bool>();
  }
  return m;
}

}  // namespace

std::vector<MaterialRecord> parse_catalog(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("catalog parse error: ") + e.what());
  }
  if (!root.is_array()) throw std::runtime_error("catalog must be a top-level array");
  std::vector<MaterialRecord> out;
  for (size_t i = 0; i < root.size(); ++i) {
    MaterialRecord m = record_from_json(root[i], i);
    m.validate();
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<MaterialRecord> load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open catalog file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return merge_catalog(builtin_catalog(), parse_catalog(ss.str()));
}

std::vector<MaterialRecord> merge_catalog(std::vector<MaterialRecord> base,
                                          const std::vector<MaterialRecord>& user) {
  for (const auto& u : user) {
    bool replaced = false;
    for (auto& b : base) {
      if (b.name == u.name) {
        b = u;
        replaced = true;
        break;
      }
    }
    if (!replaced) base.push_back(u);
  }
  return base;
}

const MaterialRecord& get(const std::vector<MaterialRecord>& catalog,
                          const std::string& name) {
  for (const auto& m : catalog)
    if (m.name == name) return m;
  std::string msg = "unknown material '" + name + "'; available:";
  for (const auto& m : catalog) msg += " " + m.name;
  throw std::out_of_range(msg);
}

std::string serialize_catalog(const std::vector<MaterialRecord>& catalog) {
  using nlohmann::json;
  json arr = json::array();
  for (const auto& m : catalog) {
    json j = json::object();
    j["name"] = m.name;
    auto put = [&j](const char* key, const std::optional<double>& v, double scale = 1.0) {
      if (v) j[key] = *v / scale;
    };
    put("c11", m.c11, kElasticUnit);
    put("c12", m.c12, kElasticUnit);
    put("c44", m.c44, kElasticUnit);
    j["density"] = m.density;
    put("e14", m.e14);
    put("e_min", m.e_min);
    put("e_max", m.e_max);
    if (m.eps_rel) {
      if (m.eps_rel->first == m.eps_rel->second)
        j["eps_rel"] = m.eps_rel->first;
      else
        j["eps_rel"] = {m.eps_rel->first, m.eps_rel->second};
    }
    put("h15", m.h15);
    put("shear_velocity", m.shear_velocity);
    put("mirror_C1", m.mirror_C1);
    put("mirror_C2", m.mirror_C2);
    put("bulk_Cb", m.bulk_Cb);
    j["qm_f_product"] = m.qm_f_product;
    if (m.estimate_only) j["estimate_only"] = true;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

}  // namespace sawqed

#ifndef GL2RES_SERIALIZE_HPP
#define GL2RES_SERIALIZE_HPP

#include <string>
#include <vector>

#include "json.hpp"

#include "gl2res/ffield.hpp"
#include "gl2res/grp.hpp"
#include "gl2res/linalg.hpp"
#include "gl2res/projline.hpp"

/**
 * @file serialize.hpp
 * @brief JSON forms of field elements, matrices, points and towers.
 */

namespace gl2res {

using json = nlohmann::ordered_json;

/// Coefficient vector c0..c_{d-1}.
inline json elem_json(const FieldTower& t, Elem x, Level level) { return t.field(level).coeffs(x); }

/// [[a,b],[c,d]] with coefficient-vector entries.
inline json mat_json(const FieldTower& t, const Mat2& m)
{
  return json::array({json::array({elem_json(t, m.a, m.level), elem_json(t, m.b, m.level)}),
                      json::array({elem_json(t, m.c, m.level), elem_json(t, m.d, m.level)})});
}

inline json point_json(const FieldTower& t, const ProjPoint& pt)
{
  if (pt.infinite)
    return "inf";
  return elem_json(t, pt.x, pt.level);
}

/// Polynomial over F_{q^2}: element indices, low degree first.
inline json poly_json(const FPoly& f) { return f; }

inline json tower_json(const FieldTower& t)
{
  json polys = json::object();
  for (int d : t.degrees())
    polys[std::to_string(d)] = t.field_of_degree(d).modulus();
  return {{"p", t.p()},
          {"f", t.f()},
          {"polys", polys},
          {"eta", elem_json(t, t.eta(), Level::P2)},
          {"epsilon", elem_json(t, t.epsilon(), Level::Q2)}};
}

inline json orbits_json(const FieldTower& t, const OrbitDecomposition& d)
{
  json orbits = json::array();
  for (const auto& o : d.orbits)
    orbits.push_back({{"rep", point_json(t, o.rep)},
                      {"size", o.size},
                      {"stab", o.stab.name()},
                      {"stab_order", o.stab_order}});
  return {{"acting", d.acting.name()},
          {"space", std::string("P1(") + level_name(d.space) + ")"},
          {"points", d.subset_size},
          {"orbit_count", d.orbits.size()},
          {"orbits", orbits}};
}

} // namespace gl2res

#endif // GL2RES_SERIALIZE_HPP

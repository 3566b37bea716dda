#ifndef GL2RES_CACHE_HPP
#define GL2RES_CACHE_HPP

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

#include "gl2res/ffield.hpp"
#include "gl2res/serialize.hpp"

/**
 * @file cache.hpp
 * @brief On-disk cache of tower descriptions keyed by (p, f), validated
 * against a fresh construction on every load.
 */

namespace gl2res {

enum class CacheOutcome { Hit, Cold, Rebuilt };

inline const char* cache_outcome_name(CacheOutcome o)
{
  switch (o) {
  case CacheOutcome::Hit: return "hit";
  case CacheOutcome::Cold: return "cold";
  case CacheOutcome::Rebuilt: return "rebuilt";
  }
  return "?";
}

struct CacheResult {
  CacheOutcome outcome = CacheOutcome::Cold;
  std::filesystem::path path;
  std::string message;
};

inline std::filesystem::path tower_cache_path(const std::filesystem::path& dir, int p, int f)
{
  return dir / ("tower_p" + std::to_string(p) + "_f" + std::to_string(f) + ".json");
}

/// Compares the stored description with the one of `t`; a missing, unreadable
/// or different file is (re)written. Hits are exact matches only.
inline CacheResult cache_tower(const FieldTower& t, const std::filesystem::path& dir)
{
  CacheResult res;
  res.path = tower_cache_path(dir, t.p(), t.f());
  const json fresh = tower_json(t);
  bool existed = false;
  if (std::filesystem::exists(res.path)) {
    existed = true;
    std::ifstream in(res.path);
    const json stored = json::parse(in, nullptr, false);
    if (!stored.is_discarded() && stored == fresh) {
      res.outcome = CacheOutcome::Hit;
      return res;
    }
    res.message = stored.is_discarded() ? "cached tower is not valid JSON" : "cached tower differs from construction";
  }
  std::filesystem::create_directories(dir);
  std::ofstream out(res.path);
  out << fresh.dump(2) << "\n";
  if (!out)
    throw std::runtime_error("cannot write tower cache " + res.path.string());
  res.outcome = existed ? CacheOutcome::Rebuilt : CacheOutcome::Cold;
  return res;
}

} // namespace gl2res

#endif // GL2RES_CACHE_HPP

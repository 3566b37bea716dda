#ifndef GL2RES_REPORT_HPP
#define GL2RES_REPORT_HPP

#include <sstream>
#include <string>
#include <vector>

#include "gl2res/ffield.hpp"
#include "gl2res/serialize.hpp"
#include "gl2res/verify.hpp"

/**
 * @file report.hpp
 * @brief Suite report assembly (schema 1) and its text rendering.
 */

namespace gl2res {

inline constexpr int kReportSchema = 1;

struct Summary {
  std::size_t pass = 0, fail = 0, skipped = 0;
};

inline Summary summarize(const std::vector<CheckReport>& checks)
{
  Summary s;
  for (const auto& c : checks) {
    if (c.status == Status::Pass)
      ++s.pass;
    else if (c.status == Status::Fail)
      ++s.fail;
    else
      ++s.skipped;
  }
  return s;
}

inline json suite_report(const FieldTower& t, const std::vector<CheckReport>& checks)
{
  json list = json::array();
  for (const auto& c : checks)
    list.push_back(to_json(c));
  const Summary s = summarize(checks);
  return {{"schema", kReportSchema},
          {"p", t.p()},
          {"f", t.f()},
          {"tower", tower_json(t)},
          {"checks", list},
          {"summary", {{"pass", s.pass}, {"fail", s.fail}, {"skipped", s.skipped}}}};
}

/// One line per check followed by its JSON payload, so nothing is dropped.
inline std::string render_text(const json& report)
{
  std::ostringstream os;
  os << "schema " << report.at("schema") << "  p=" << report.at("p") << " f=" << report.at("f") << "\n";
  os << "tower " << report.at("tower").dump() << "\n";
  for (const auto& c : report.at("checks")) {
    os << c.at("status").get<std::string>() << "  " << c.at("id").get<std::string>();
    if (!c.at("r").is_null())
      os << " r=" << c.at("r");
    if (!c.at("part").is_null())
      os << " part=" << c.at("part");
    os << "  (" << c.at("elapsed_ms").get<double>() << " ms)";
    if (!c.at("reason").get<std::string>().empty())
      os << "  " << c.at("reason").get<std::string>();
    os << "\n    details " << c.at("details").dump() << "\n";
    if (!c.at("witness").is_null())
      os << "    witness " << c.at("witness").dump() << "\n";
  }
  const auto& s = report.at("summary");
  os << "summary pass=" << s.at("pass") << " fail=" << s.at("fail") << " skipped=" << s.at("skipped") << "\n";
  return os.str();
}

} // namespace gl2res

#endif // GL2RES_REPORT_HPP

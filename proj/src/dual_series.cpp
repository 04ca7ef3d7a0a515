#include "h2cem/lp/dual_series.hpp"

#include <charconv>

namespace h2cem::lp {

Index DualSeries::present() const {
  Index n = 0;
  for (const auto& v : values) n += v.has_value();
  return n;
}

Eigen::VectorXd DualSeries::scenario(Index s, double fill) const {
  Eigen::VectorXd out(hours);
  for (Index t = 0; t < hours; ++t) out[t] = at(s, t).value_or(fill);
  return out;
}

namespace {

std::optional<Index> to_index(std::string_view s) {
  Index v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 0) return std::nullopt;
  return v;
}

}  // namespace

std::optional<ParsedName> parse_indexed_name(std::string_view name) {
  const auto open = name.find('[');
  if (open == std::string_view::npos || name.back() != ']') return std::nullopt;
  ParsedName out;
  out.family = std::string(name.substr(0, open));
  const std::string_view inside = name.substr(open + 1, name.size() - open - 2);
  const auto comma = inside.find(',');
  auto s = to_index(inside.substr(0, comma));
  if (!s) return std::nullopt;
  out.s = *s;
  if (comma != std::string_view::npos) {
    auto t = to_index(inside.substr(comma + 1));
    if (!t) return std::nullopt;
    out.t = *t;
  }
  return out;
}

DualSeries dual_series(const Solution<double>& sol, std::string_view family) {
  if (!sol.names) throw std::invalid_argument("solution carries no names");
  struct Hit {
    Index row, s, t;
  };
  std::vector<Hit> hits;
  Index max_s = -1, max_t = -1;
  bool hourly = false;
  const auto& names = sol.names->constraints;
  for (Index i = 0; i < Index(names.size()); ++i) {
    const std::string& n = names[i];
    if (n.size() <= family.size() || n.compare(0, family.size(), family) != 0 ||
        n[family.size()] != '[')
      continue;
    auto p = parse_indexed_name(n);
    if (!p || p->family != family) continue;
    hourly = hourly || p->t >= 0;
    hits.push_back({i, p->s, p->t});
    max_s = std::max(max_s, p->s);
    max_t = std::max(max_t, p->t);
  }
  if (hits.empty()) throw UnknownFamilyError("no constraints in family '" + std::string(family) + "'");
  DualSeries out;
  out.family = std::string(family);
  out.scenarios = max_s + 1;
  out.hours = hourly ? max_t + 1 : 1;
  out.values.assign(std::size_t(out.scenarios * out.hours), std::nullopt);
  for (const auto& h : hits) out.values[h.s * out.hours + std::max<Index>(h.t, 0)] = sol.dual[h.row];
  return out;
}

}  // namespace h2cem::lp

#include "h2cem/lp/lp_format.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace h2cem::lp {

const char* to_string(FileFormat f) { return f == FileFormat::Mps ? "mps" : "lp"; }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::optional<double> parse_num(std::string_view s) {
  std::string lower(s);
  for (auto& ch : lower) ch = char(std::tolower(static_cast<unsigned char>(ch)));
  if (lower == "inf" || lower == "+inf" || lower == "infinity" || lower == "+infinity") return kInf;
  if (lower == "-inf" || lower == "-infinity") return -kInf;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

double need_num(std::string_view s, const std::string& where) {
  auto v = parse_num(s);
  if (!v) throw ParseError(where + ": expected a number, got '" + std::string(s) + "'");
  return *v;
}

std::optional<std::string> name_problem(const std::string& name, FileFormat format) {
  if (name.empty()) return "empty";
  if (name.size() > kMaxNameLength) return "longer than 255 characters";
  for (unsigned char ch : name)
    if (std::isspace(ch) || !std::isprint(ch)) return "contains whitespace or a control character";
  if (format == FileFormat::Mps) {
    if (name[0] == '*' || name[0] == '$') return "starts with a comment marker";
    return std::nullopt;
  }
  static const std::string extra = "!\"#$%&()/,.;?@_`'{}|~[]";
  for (unsigned char ch : name)
    if (!std::isalnum(ch) && extra.find(char(ch)) == std::string::npos)
      return std::string("character '") + char(ch) + "' not allowed in LP text";
  if (std::isdigit(static_cast<unsigned char>(name[0])) || name[0] == '.')
    return "starts with a digit or period";
  if ((name[0] == 'e' || name[0] == 'E') && name.size() > 1 &&
      (std::isdigit(static_cast<unsigned char>(name[1])) || name[1] == 'e' || name[1] == 'E'))
    return "reads as an exponent";
  std::string lower = name;
  for (auto& ch : lower) ch = char(std::tolower(static_cast<unsigned char>(ch)));
  static const char* keywords[] = {"minimize", "minimise", "minimum", "min", "maximize", "maximise",
                                   "maximum", "max", "subject", "to", "st", "s.t.", "such",
                                   "that", "bounds", "bound", "free", "inf", "infinity", "end",
                                   "general", "generals", "gen", "integer", "integers",
                                   "binary", "binaries", "bin", "semi-continuous", "sec"};
  for (const char* k : keywords)
    if (lower == k) return "reserved word";
  return std::nullopt;
}

std::string objective_row_name(const LinearProgramd& lp) {
  std::string name = "OBJ";
  while (lp.find_constraint(name)) name += "_";
  return name;
}

std::string emit_mps(const LinearProgramd& lp) {
  std::ostringstream out;
  const std::string obj = objective_row_name(lp);
  out << "NAME model\nROWS\n N  " << obj << "\n";
  for (const auto& c : lp.constraints()) {
    const char* t = c.sense == Sense::LessEqual ? "L" : c.sense == Sense::Equal ? "E" : "G";
    out << " " << t << "  " << c.name << "\n";
  }
  out << "COLUMNS\n";
  const auto a = lp.matrix();
  for (Index j = 0; j < lp.num_variables(); ++j) {
    const auto& v = lp.variable(j);
    bool any = false;
    if (v.cost != 0) {
      out << "    " << v.name << "  " << obj << "  " << num(v.cost) << "\n";
      any = true;
    }
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, j); it; ++it) {
      if (it.value() == 0) continue;
      out << "    " << v.name << "  " << lp.constraint(it.row()).name << "  " << num(it.value())
          << "\n";
      any = true;
    }
    // Keeps columns without entries from disappearing.
    if (!any) out << "    " << v.name << "  " << obj << "  0\n";
  }
  out << "RHS\n";
  if (lp.objective_offset() != 0) out << "    RHS  " << obj << "  " << num(-lp.objective_offset()) << "\n";
  for (const auto& c : lp.constraints())
    if (c.rhs != 0) out << "    RHS  " << c.name << "  " << num(c.rhs) << "\n";
  out << "BOUNDS\n";
  for (const auto& v : lp.variables()) {
    if (v.lower == v.upper) {
      out << " FX BND  " << v.name << "  " << num(v.lower) << "\n";
      continue;
    }
    if (v.lower == -kInf && v.upper == kInf) {
      out << " FR BND  " << v.name << "\n";
      continue;
    }
    if (v.lower == -kInf) out << " MI BND  " << v.name << "\n";
    else if (v.lower != 0) out << " LO BND  " << v.name << "  " << num(v.lower) << "\n";
    if (v.upper != kInf) out << " UP BND  " << v.name << "  " << num(v.upper) << "\n";
  }
  out << "ENDATA\n";
  return out.str();
}

std::string bound_text(double v) {
  if (v == kInf) return "+inf";
  if (v == -kInf) return "-inf";
  return num(v);
}

void emit_terms(std::ostringstream& out, const std::vector<std::pair<std::string, double>>& terms) {
  int on_line = 0;
  for (const auto& [name, coef] : terms) {
    if (on_line == 8) {
      out << "\n   ";
      on_line = 0;
    }
    out << (coef < 0 ? " - " : " + ") << num(std::abs(coef)) << " " << name;
    ++on_line;
  }
}

std::string emit_lp_text(const LinearProgramd& lp) {
  std::ostringstream out;
  out << "\\ generated model\nMinimize\n obj:";
  std::vector<std::pair<std::string, double>> terms;
  for (const auto& v : lp.variables())
    if (v.cost != 0) terms.emplace_back(v.name, v.cost);
  emit_terms(out, terms);
  if (lp.objective_offset() != 0)
    out << (lp.objective_offset() < 0 ? " - " : " + ") << num(std::abs(lp.objective_offset()));
  out << "\nSubject To\n";
  for (const auto& c : lp.constraints()) {
    out << " " << c.name << ":";
    terms.clear();
    for (const auto& t : c.terms)
      if (t.coefficient != 0) terms.emplace_back(lp.variable(t.column).name, t.coefficient);
    if (terms.empty()) out << " 0 " << lp.variable(0).name;
    emit_terms(out, terms);
    const char* s = c.sense == Sense::LessEqual ? "<=" : c.sense == Sense::Equal ? "=" : ">=";
    out << " " << s << " " << num(c.rhs) << "\n";
  }
  out << "Bounds\n";
  for (const auto& v : lp.variables()) {
    if (v.lower == v.upper) out << " " << v.name << " = " << num(v.lower) << "\n";
    else if (v.lower == -kInf && v.upper == kInf) out << " " << v.name << " free\n";
    else out << " " << bound_text(v.lower) << " <= " << v.name << " <= " << bound_text(v.upper) << "\n";
  }
  out << "End\n";
  return out.str();
}

// Builder that records columns in first-seen order.
struct Collector {
  std::vector<Variable<double>> vars;
  std::unordered_map<std::string, Index> index;

  Index column(const std::string& name) {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    const Index j = Index(vars.size());
    vars.push_back({name, 0, kInf, 0});
    index.emplace(name, j);
    return j;
  }
};

std::vector<std::string> tokens_of(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

LinearProgramd parse_mps(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line, section, obj;
  Collector cols;
  struct RowData {
    std::string name;
    Sense sense;
    double rhs = 0;
    std::vector<Term<double>> terms;
  };
  std::vector<RowData> rows;
  std::unordered_map<std::string, std::size_t> row_index;
  double offset = 0;
  std::size_t line_no = 0;
  std::vector<bool> lower_set;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '*') continue;
    const auto tok = tokens_of(line);
    if (tok.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (!std::isspace(static_cast<unsigned char>(line[0]))) {
      section = tok[0];
      if (section == "ENDATA") break;
      if (section == "RANGES") throw ParseError(where + ": RANGES section not supported");
      continue;
    }
    if (section == "ROWS") {
      if (tok.size() != 2) throw ParseError(where + ": expected '<type> <name>'");
      if (tok[0] == "N") {
        if (obj.empty()) obj = tok[1];
        continue;
      }
      Sense s;
      if (tok[0] == "L") s = Sense::LessEqual;
      else if (tok[0] == "G") s = Sense::GreaterEqual;
      else if (tok[0] == "E") s = Sense::Equal;
      else throw ParseError(where + ": unknown row type " + tok[0]);
      row_index.emplace(tok[1], rows.size());
      rows.push_back({tok[1], s, 0, {}});
    } else if (section == "COLUMNS") {
      if (tok.size() != 3 && tok.size() != 5) throw ParseError(where + ": malformed COLUMNS entry");
      const Index j = cols.column(tok[0]);
      for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
        const double v = need_num(tok[k + 1], where);
        if (tok[k] == obj) {
          cols.vars[j].cost += v;
          continue;
        }
        auto it = row_index.find(tok[k]);
        if (it == row_index.end()) throw ParseError(where + ": unknown row " + tok[k]);
        rows[it->second].terms.push_back({j, v});
      }
    } else if (section == "RHS") {
      if (tok.size() != 3 && tok.size() != 5) throw ParseError(where + ": malformed RHS entry");
      for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
        const double v = need_num(tok[k + 1], where);
        if (tok[k] == obj) {
          offset = -v;
          continue;
        }
        auto it = row_index.find(tok[k]);
        if (it == row_index.end()) throw ParseError(where + ": unknown row " + tok[k]);
        rows[it->second].rhs = v;
      }
    } else if (section == "BOUNDS") {
      if (tok.size() < 3) throw ParseError(where + ": malformed BOUNDS entry");
      auto it = cols.index.find(tok[2]);
      if (it == cols.index.end()) throw ParseError(where + ": unknown column " + tok[2]);
      auto& v = cols.vars[it->second];
      const std::string& type = tok[0];
      if (type == "FR") {
        v.lower = -kInf;
        v.upper = kInf;
      } else if (type == "MI") {
        v.lower = -kInf;
      } else if (type == "PL") {
        v.upper = kInf;
      } else {
        if (tok.size() != 4) throw ParseError(where + ": bound value missing");
        const double b = need_num(tok[3], where);
        if (type == "UP") v.upper = b;
        else if (type == "LO") v.lower = b;
        else if (type == "FX") v.lower = v.upper = b;
        else throw ParseError(where + ": unsupported bound type " + type);
      }
    } else if (section != "NAME" && section != "OBJSENSE") {
      throw ParseError(where + ": data outside a known section");
    }
  }
  LinearProgramd lp;
  for (const auto& v : cols.vars) lp.add_variable(v.name, v.lower, v.upper, v.cost);
  for (auto& r : rows) lp.add_constraint(r.name, std::move(r.terms), r.sense, r.rhs);
  lp.set_objective_offset(offset);
  return lp;
}

bool is_sense(const std::string& t) {
  return t == "<=" || t == ">=" || t == "=" || t == "=<" || t == "=>" || t == "<" || t == ">";
}

Sense sense_of(const std::string& t) {
  if (t == "<=" || t == "=<" || t == "<") return Sense::LessEqual;
  if (t == ">=" || t == "=>" || t == ">") return Sense::GreaterEqual;
  return Sense::Equal;
}

std::string lowercase(std::string s) {
  for (auto& ch : s) ch = char(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

LinearProgramd parse_lp_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  enum class Part { None, Objective, Constraints, Bounds, Done } part = Part::None;
  std::vector<std::string> obj_tokens, con_tokens;
  std::vector<std::vector<std::string>> bound_lines;
  while (std::getline(in, line)) {
    if (auto c = line.find('\\'); c != std::string::npos) line.erase(c);
    auto tok = tokens_of(line);
    if (tok.empty()) continue;
    const std::string head = lowercase(tok[0]);
    if (head == "minimize" || head == "minimise" || head == "min") {
      part = Part::Objective;
      tok.erase(tok.begin());
    } else if (head == "maximize" || head == "max" || head == "maximise") {
      throw ParseError("maximization is not supported");
    } else if (head == "subject" || head == "st" || head == "s.t.") {
      part = Part::Constraints;
      tok.erase(tok.begin(), tok.begin() + ((head == "subject" && tok.size() > 1) ? 2 : 1));
    } else if (head == "bounds" || head == "bound") {
      part = Part::Bounds;
      continue;
    } else if (head == "end") {
      part = Part::Done;
      continue;
    } else if (head == "general" || head == "generals" || head == "binary" || head == "binaries") {
      throw ParseError("integer sections are not supported");
    }
    switch (part) {
      case Part::Objective: obj_tokens.insert(obj_tokens.end(), tok.begin(), tok.end()); break;
      case Part::Constraints: con_tokens.insert(con_tokens.end(), tok.begin(), tok.end()); break;
      case Part::Bounds: bound_lines.push_back(tok); break;
      case Part::None: throw ParseError("content before the objective section");
      case Part::Done: break;
    }
  }

  Collector cols;
  // Bounds list every column in model order, so they fix the column order.
  for (const auto& b : bound_lines) {
    for (const auto& t : b)
      if (!parse_num(t) && !is_sense(t) && lowercase(t) != "free") cols.column(t);
  }

  // Reads "[+|-] [coef] name" terms (or a bare constant) up to a sense token.
  auto read_terms = [&](const std::vector<std::string>& tok, std::size_t& i,
                        std::vector<Term<double>>& terms, double& constant) {
    while (i < tok.size() && !is_sense(tok[i]) && tok[i].back() != ':') {
      double sign = 1;
      if (tok[i] == "+" || tok[i] == "-") {
        sign = tok[i] == "-" ? -1 : 1;
        if (++i >= tok.size()) throw ParseError("dangling sign");
      }
      double coef = 1;
      if (auto v = parse_num(tok[i])) {
        coef = *v;
        ++i;
        if (i >= tok.size() || is_sense(tok[i]) || tok[i] == "+" || tok[i] == "-" ||
            tok[i].back() == ':') {
          constant += sign * coef;
          continue;
        }
      }
      terms.push_back({cols.column(tok[i]), sign * coef});
      ++i;
    }
  };

  LinearProgramd lp;
  double offset = 0;
  {
    std::size_t i = 0;
    if (!obj_tokens.empty() && obj_tokens[0].back() == ':') ++i;
    std::vector<Term<double>> terms;
    read_terms(obj_tokens, i, terms, offset);
    if (i != obj_tokens.size()) throw ParseError("unexpected token in objective: " + obj_tokens[i]);
    for (const auto& t : terms) cols.vars[t.column].cost += t.coefficient;
  }
  struct RowData {
    std::string name;
    std::vector<Term<double>> terms;
    Sense sense;
    double rhs;
  };
  std::vector<RowData> rows;
  for (std::size_t i = 0; i < con_tokens.size();) {
    RowData r;
    if (con_tokens[i].back() != ':') throw ParseError("constraint without a name at " + con_tokens[i]);
    r.name = con_tokens[i].substr(0, con_tokens[i].size() - 1);
    ++i;
    double constant = 0;
    read_terms(con_tokens, i, r.terms, constant);
    if (i + 1 >= con_tokens.size() || !is_sense(con_tokens[i]))
      throw ParseError("constraint " + r.name + " has no sense and rhs");
    r.sense = sense_of(con_tokens[i]);
    r.rhs = need_num(con_tokens[i + 1], "constraint " + r.name) - constant;
    i += 2;
    rows.push_back(std::move(r));
  }
  for (const auto& b : bound_lines) {
    auto var = [&](const std::string& n) -> Variable<double>& { return cols.vars[cols.column(n)]; };
    if (b.size() == 2 && lowercase(b[1]) == "free") {
      var(b[0]).lower = -kInf;
      var(b[0]).upper = kInf;
    } else if (b.size() == 3 && is_sense(b[1]) && parse_num(b[2])) {
      const double v = need_num(b[2], "bounds");
      const Sense s = sense_of(b[1]);
      if (s == Sense::Equal) var(b[0]).lower = var(b[0]).upper = v;
      else if (s == Sense::LessEqual) var(b[0]).upper = v;
      else var(b[0]).lower = v;
    } else if (b.size() == 3 && is_sense(b[1]) && parse_num(b[0])) {
      const double v = need_num(b[0], "bounds");
      if (sense_of(b[1]) == Sense::LessEqual) var(b[2]).lower = v;
      else var(b[2]).upper = v;
    } else if (b.size() == 5 && sense_of(b[1]) == Sense::LessEqual &&
               sense_of(b[3]) == Sense::LessEqual) {
      var(b[2]).lower = need_num(b[0], "bounds");
      var(b[2]).upper = need_num(b[4], "bounds");
    } else {
      std::string joined;
      for (const auto& t : b) joined += t + " ";
      throw ParseError("unsupported bound line: " + joined);
    }
  }
  for (const auto& v : cols.vars) lp.add_variable(v.name, v.lower, v.upper, v.cost);
  for (auto& r : rows) {
    // A placeholder "0 x" in an empty row leaves a zero entry; drop it.
    std::erase_if(r.terms, [](const Term<double>& t) { return t.coefficient == 0; });
    lp.add_constraint(r.name, std::move(r.terms), r.sense, r.rhs);
  }
  lp.set_objective_offset(offset);
  return lp;
}

}  // namespace

std::vector<std::string> check_names(const LinearProgramd& lp, FileFormat format) {
  std::vector<std::string> out;
  for (const auto& v : lp.variables())
    if (auto p = name_problem(v.name, format)) out.push_back("variable '" + v.name + "': " + *p);
  for (const auto& c : lp.constraints())
    if (auto p = name_problem(c.name, format)) out.push_back("constraint '" + c.name + "': " + *p);
  return out;
}

std::string emit_lp_file(const LinearProgramd& lp, FileFormat format) {
  const auto problems = lp.check();
  if (!problems.empty()) throw std::invalid_argument("malformed LP: " + problems.front());
  for (const auto& v : lp.variables())
    if (auto p = name_problem(v.name, format)) throw NameFormatError(v.name, *p);
  for (const auto& c : lp.constraints())
    if (auto p = name_problem(c.name, format)) throw NameFormatError(c.name, *p);
  if (format == FileFormat::LpText && lp.num_variables() == 0 && lp.num_constraints() > 0)
    throw std::invalid_argument("LP text needs at least one column");
  return format == FileFormat::Mps ? emit_mps(lp) : emit_lp_text(lp);
}

LinearProgramd parse_lp_file(std::string_view text, FileFormat format) {
  return format == FileFormat::Mps ? parse_mps(text) : parse_lp_text(text);
}

}  // namespace h2cem::lp

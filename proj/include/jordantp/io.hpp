#pragma once

/**
 * @file io.hpp
 * @brief JSON and CSV serialization. Needs nlohmann/json on the include path.
 *
 * Doubles are written by nlohmann's shortest round-trip formatter, which
 * reproduces every value exactly on reading back.
 */

#include "jordantp/convexgeom.hpp"
#include "jordantp/model.hpp"
#include "jordantp/report.hpp"
#include "jordantp/transition.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace jordantp::io {

using json = nlohmann::ordered_json;

class ParseError : public Error {
 public:
  using Error::Error;
};

inline json to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline json to_json(const Element& e) { return to_json(e.coords); }

inline Eigen::VectorXd vector_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected a JSON array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError("expected a JSON array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

template <Backend M>
Element element_from_json(const M& model, const json& j) {
  Element e(vector_from_json(j));
  check_element(model, e);
  return e;
}

inline json to_json(const ModelDescriptor& d) {
  json j;
  j["kind"] = kind_name(d.kind);
  j["n"] = d.n;
  if (d.kind == BackendKind::lp_qubit) j["p"] = d.p;
  j["ambient_dim"] = d.ambient_dim;
  j["info_capacity"] = d.info_capacity;
  j["symmetric_tp"] = d.symmetric_tp;
  j["has_inner_product"] = d.has_inner_product;
  return j;
}

/// {kind, n, p?} as written by to_json, or the "kind:n[:p]" string.
inline Model model_from_json(const json& j) {
  if (j.is_string()) return Model::parse(j.get<std::string>());
  if (!j.is_object() || !j.contains("kind") || !j.contains("n")) throw ParseError("model descriptor needs kind and n");
  std::string spec = j["kind"].get<std::string>() + ":" + std::to_string(j["n"].get<int>());
  if (j.contains("p")) {
    std::ostringstream os;
    os.precision(17);
    os << j["p"].get<double>();
    spec += ":" + os.str();
  }
  return Model::parse(spec);
}

inline json to_json(const SpectralForm& sf) {
  json pairs = json::array();
  for (const auto& [s, e] : sf.pairs) pairs.push_back({{"eigenvalue", s}, {"atom", to_json(e)}});
  return json{{"complete", sf.complete}, {"pairs", pairs}};
}

inline json to_json(const Check& c) {
  json j{{"name", c.name}, {"passed", c.passed}, {"defect", c.defect}, {"tolerance", c.tolerance}};
  if (c.witness) j["witness"] = to_json(*c.witness);
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline json to_json(const VerificationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return json{{"model", to_json(r.model)}, {"suite", r.suite},         {"seed", r.seed},
              {"trials", r.trials},        {"passed", r.all_passed()}, {"checks", checks},
              {"wall_time_ms", r.wall_time_ms}};
}

inline json to_json(const EOmegaReport& r) {
  return json{{"omega_index", r.omega_index},     {"values_at_vertices", r.values_at_vertices},
              {"affinity_defect", r.affinity_defect}, {"worst_point", to_json(r.worst_point)},
              {"max_off_value", r.max_off_value}, {"passes", r.passes}};
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// name,passed,defect,tolerance,note
inline std::string report_csv(const VerificationReport& r) {
  std::string out = "name,passed,defect,tolerance,note\n";
  for (const auto& c : r.checks) {
    std::string note = c.note;
    std::replace(note.begin(), note.end(), '"', '\'');
    out += c.name + "," + (c.passed ? "true" : "false") + "," + format_double(c.defect) + "," + format_double(c.tolerance) +
           ",\"" + note + "\"\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV input
// ---------------------------------------------------------------------------

/// Rows of numbers separated by commas (or whitespace). Blank lines and
/// lines starting with '#' are skipped; anything else non-numeric is an error.
inline std::vector<std::vector<double>> parse_csv_rows(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || !std::isfinite(v)) {
        throw ParseError("line " + std::to_string(lineno) + ": '" + tok + "' is not a finite number");
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(rows.front().size()) + " columns");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no data rows");
  return rows;
}

inline PolytopeStateSpace polytope_from_csv(std::string_view text) {
  std::vector<Eigen::VectorXd> vs;
  for (const auto& r : parse_csv_rows(text)) vs.push_back(Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size())));
  return PolytopeStateSpace(std::move(vs));
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/**
 * Atoms file: a JSON array whose entries are either coordinate arrays or
 * objects {"re": [...], "im": [...]} naming an atom parameter.
 */
template <Backend M>
std::vector<Element> atoms_from_json(const M& model, const json& j, const Tolerance& tol = {}) {
  if (!j.is_array() || j.empty()) throw ParseError("atoms file must be a non-empty JSON array");
  std::vector<Element> atoms;
  for (const auto& entry : j) {
    if (entry.is_array()) {
      atoms.push_back(element_from_json(model, entry));
    } else if (entry.is_object() && entry.contains("re")) {
      const Eigen::VectorXd re = vector_from_json(entry["re"]);
      Eigen::VectorXd im = Eigen::VectorXd::Zero(re.size());
      if (entry.contains("im")) im = vector_from_json(entry["im"]);
      if (im.size() != re.size()) throw ParseError("atom parameter re/im lengths differ");
      Eigen::VectorXcd dir(re.size());
      for (Eigen::Index i = 0; i < re.size(); ++i) dir[i] = {re[i], im[i]};
      atoms.push_back(model.atom_from_param(AtomParam::complex(dir), tol));
    } else {
      throw ParseError("atom entry must be a coordinate array or {\"re\": [...], \"im\": [...]}");
    }
  }
  return atoms;
}

}  // namespace jordantp::io

#include "cqavwc/channel_io.hpp"

#include <fstream>
#include <sstream>

namespace cqavwc {

using nlohmann::json;

ComplexMatrix matrix_from_json(const json& j, const std::string& context) {
  if (!j.is_array() || j.empty()) throw ParseError(context + ": expected a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  ComplexMatrix m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array()) throw ParseError(context + " row " + std::to_string(r) + ": expected an array of entries");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      m.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError(context + " row " + std::to_string(r) + ": ragged row (" + std::to_string(row.size()) +
                       " entries, expected " + std::to_string(cols) + ")");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& e = row[static_cast<std::size_t>(c)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ParseError(context + " row " + std::to_string(r) + " col " + std::to_string(c) +
                         ": expected [real, imaginary] pair");
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::vector<std::string> string_list(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("missing key \"") + key + "\"");
  const auto& v = doc.at(key);
  if (!v.is_array()) throw ParseError(std::string("key \"") + key + "\": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw ParseError(std::string("key \"") + key + "\": expected an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

long integer(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("missing key \"") + key + "\"");
  const auto& v = doc.at(key);
  if (!v.is_number_integer()) throw ParseError(std::string("key \"") + key + "\": expected an integer");
  return v.get<long>();
}

std::map<std::string, ComplexMatrix> matrix_map(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("missing key \"") + key + "\"");
  const auto& v = doc.at(key);
  if (!v.is_object()) throw ParseError(std::string("key \"") + key + "\": expected an object keyed \"x|t\"");
  std::map<std::string, ComplexMatrix> out;
  for (auto it = v.begin(); it != v.end(); ++it)
    out.emplace(it.key(), matrix_from_json(it.value(), std::string(key) + "[\"" + it.key() + "\"]"));
  return out;
}

}  // namespace

RawChannel parse_channel_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports a byte offset; translate it to a line number.
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min(e.byte, text.size()); ++i)
      if (text[i] == '\n') ++line;
    throw ParseError("line " + std::to_string(line) + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("top level: expected a JSON object");
  RawChannel raw;
  raw.schema_version = static_cast<int>(integer(doc, "schema_version"));
  raw.dim_legal = integer(doc, "dim_legal");
  raw.dim_eve = integer(doc, "dim_eve");
  raw.inputs = string_list(doc, "inputs");
  raw.states = string_list(doc, "states");
  raw.rho = matrix_map(doc, "rho");
  raw.sigma = matrix_map(doc, "sigma");
  return raw;
}

RawChannel load_channel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open channel file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_channel_json(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

json channel_to_json(const CqavwcChannel& ch) {
  json doc;
  doc["schema_version"] = 1;
  doc["dim_legal"] = ch.dim(Receiver::legal);
  doc["dim_eve"] = ch.dim(Receiver::eve);
  doc["inputs"] = ch.inputs();
  doc["states"] = ch.states();
  json rho = json::object();
  json sigma = json::object();
  for (std::size_t x = 0; x < ch.num_inputs(); ++x) {
    for (std::size_t t = 0; t < ch.num_states(); ++t) {
      const auto key = state_key(ch.inputs()[x], ch.states()[t]);
      rho[key] = matrix_to_json(ch.legal(x, t).matrix());
      sigma[key] = matrix_to_json(ch.eve(x, t).matrix());
    }
  }
  doc["rho"] = std::move(rho);
  doc["sigma"] = std::move(sigma);
  return doc;
}

}  // namespace cqavwc

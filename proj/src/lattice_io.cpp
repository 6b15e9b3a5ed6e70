#include <fstream>
#include <sstream>

#include <json.hpp>

#include "designzeta/errors.hpp"
#include "designzeta/lattice.hpp"

namespace dz {

std::string to_lattice_document(const Lattice& l) {
  const int n = l.dim();
  std::ostringstream os;
  os << "{\n  \"name\": " << nlohmann::json(l.name()).dump() << ",\n  \"dim\": " << n << ",\n  \"gram\": [\n";
  for (int i = 0; i < n; ++i) {
    os << "    [";
    for (int j = 0; j < n; ++j) os << (j ? ", " : "") << '"' << to_string(l.gram()(i, j)) << '"';
    os << (i + 1 < n ? "],\n" : "]\n");
  }
  os << "  ]";
  if (!l.scale().is_one()) os << ",\n  \"scale\": \"" << to_string(l.scale()) << '"';
  os << "\n}\n";
  return os.str();
}

Lattice parse_lattice_document(std::string_view text, std::string_view origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("lattice document: ") + e.what());
  }
  auto fail = [](const std::string& what) -> ParseError { return ParseError("lattice document: " + what); };
  if (!doc.is_object()) throw fail("top level must be an object");
  if (!doc.contains("name") || !doc["name"].is_string()) throw fail("missing string field 'name'");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer()) throw fail("missing integer field 'dim'");
  if (!doc.contains("gram") || !doc["gram"].is_array()) throw fail("missing array field 'gram'");
  const auto n = doc["dim"].get<long long>();
  if (n < 1 || n > 256) throw fail("dim out of range");
  const auto& rows = doc["gram"];
  if (static_cast<long long>(rows.size()) != n) throw fail("gram must have dim rows");
  RationalMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<long long>(row.size()) != n) throw fail("gram row " + std::to_string(i) + " must have dim entries");
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& e = row[static_cast<std::size_t>(j)];
      if (e.is_string())
        m(i, j) = parse_rational(e.get<std::string>());
      else if (e.is_number_integer())
        m(i, j) = Rational(e.get<long long>());
      else
        throw fail("gram entries must be rational strings");
    }
  }
  Scale scale;
  if (doc.contains("scale")) {
    if (!doc["scale"].is_string()) throw fail("scale must be a string");
    scale = parse_scale(doc["scale"].get<std::string>());
  }
  return Lattice(doc["name"].get<std::string>(), GramMatrix(std::move(m)), scale,
                 Provenance{Provenance::Kind::file, std::string(origin), 0, false});
}

void write_lattice_file(const Lattice& l, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << to_lattice_document(l);
  if (!out) throw Error("write failed for " + path.string());
}

Lattice read_lattice_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read lattice file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_lattice_document(buf.str(), path.string());
}

}  // namespace dz

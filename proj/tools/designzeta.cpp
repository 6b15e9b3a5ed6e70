#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "designzeta/design.hpp"
#include "designzeta/errors.hpp"
#include "designzeta/extremality.hpp"
#include "designzeta/shells.hpp"
#include "designzeta/theta.hpp"
#include "designzeta/zeta.hpp"

namespace {

using namespace dz;
using json = nlohmann::ordered_json;

enum class Format { table, csv, json };

struct RunConfig {
  std::string command;
  std::string lattice;
  std::string file;
  int dim = 0;
  int depth = 5;
  int t = 4;
  std::vector<double> s;
  std::vector<double> y;
  unsigned precision_bits = default_precision_bits;
  std::uint64_t seed = 1;
  double step = 1e-3;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  int points = 37;
  std::uint64_t budget = 0;
  bool unit_covolume = false;
  Format format = Format::table;
  std::string out;
};

Lattice load(const RunConfig& c) {
  if (!c.file.empty() && !c.lattice.empty()) throw ParseError("give either --lattice or --file, not both");
  if (!c.file.empty()) return read_lattice_file(c.file);
  if (c.lattice.empty()) throw ParseError("a lattice is required (--lattice or --file)");
  return catalog_lattice(c.lattice, c.dim);
}

Lattice load_working(const RunConfig& c) {
  Lattice l = load(c);
  return c.unit_covolume ? rescale_to_covolume_one(l) : l;
}

std::uint64_t budget_or(const RunConfig& c, std::uint64_t fallback) { return c.budget ? c.budget : fallback; }

ZetaOptions zeta_options(const RunConfig& c) {
  ZetaOptions o;
  o.precision_bits = c.precision_bits;
  o.threads = c.threads;
  o.budget = budget_or(c, 1'000'000'000);
  return o;
}

void emit_table(std::ostream& os, const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t j = 0; j < header.size(); ++j) width[j] = header[j].size();
  for (const auto& r : rows)
    for (std::size_t j = 0; j < r.size(); ++j) width[j] = std::max(width[j], r[j].size());
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t j = 0; j < r.size(); ++j) {
      os << (j ? "  " : "") << r[j];
      if (j + 1 < r.size()) os << std::string(width[j] - r[j].size(), ' ');
    }
    os << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

void emit(std::ostream& os, Format f, const std::vector<std::string>& header,
          const std::vector<std::vector<std::string>>& rows) {
  if (f == Format::table) return emit_table(os, header, rows);
  if (f == Format::csv) {
    for (std::size_t j = 0; j < header.size(); ++j) os << (j ? "," : "") << header[j];
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t j = 0; j < r.size(); ++j) os << (j ? "," : "") << r[j];
      os << '\n';
    }
    return;
  }
  json doc = json::array();
  for (const auto& r : rows) {
    json rec = json::object();
    for (std::size_t j = 0; j < r.size(); ++j) rec[header[j]] = r[j];
    doc.push_back(rec);
  }
  os << doc.dump(2) << '\n';
}

void cmd_shells(const RunConfig& c, std::ostream& os) {
  const Lattice l = load_working(c);
  if (c.depth < 1) throw DomainError("--depth must be >= 1");
  EnumerationOptions eo;
  eo.keep_vectors = false;
  eo.budget = budget_or(c, 2'000'000'000);
  eo.threads = c.threads;
  std::vector<std::vector<std::string>> rows;
  for (const auto& s : first_k_shells(l, c.depth, eo))
    rows.push_back({std::to_string(s.index), to_string(s.norm), std::to_string(s.cardinality)});
  emit(os, c.format, {"k", "m_k", "a_k"}, rows);
}

void cmd_design(const RunConfig& c, std::ostream& os) {
  const Lattice l = load(c);
  CertificationOptions co;
  co.threads = c.threads;
  co.budget = budget_or(c, co.budget);
  const CertificationReport r = certify_lattice(l, c.depth, c.t, co);
  if (c.format == Format::json) {
    os << to_certificate_document(r);
    return;
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& cert : r.shells)
    for (const auto& v : cert.checks)
      rows.push_back({std::to_string(cert.shell), to_string(cert.norm), std::to_string(cert.cardinality),
                      std::to_string(v.t), v.pass ? "pass" : "fail", to_string(v.defect)});
  emit(os, c.format, {"k", "m_k", "a_k", "t", "verdict", "defect"}, rows);
  if (c.format == Format::table) {
    os << "all 2-design up to depth " << r.depth << ": " << (r.all_2_design ? "yes" : "no") << '\n';
    if (r.t_max >= 4) os << "all 4-design up to depth " << r.depth << ": " << (r.all_4_design ? "yes" : "no") << '\n';
    os << r.scope_note << '\n';
  }
}

void cmd_zeta(const RunConfig& c, std::ostream& os) {
  if (c.s.empty()) throw ParseError("zeta needs at least one --s");
  const Lattice l = load_working(c);
  const ZetaOptions o = zeta_options(c);
  std::vector<ZetaValue> values;
  for (double s : c.s) values.push_back(zeta(l, s, o));
  if (c.format == Format::csv) return write_zeta_csv(os, values);
  std::vector<std::vector<std::string>> rows;
  for (const auto& v : values)
    rows.push_back({format_sci(v.s, 15), format_sci(v.value, 20), format_sci(v.err, 3), std::string(to_string(v.method))});
  emit(os, c.format, {"s", "zeta", "err", "method"}, rows);
}

void cmd_theta(const RunConfig& c, std::ostream& os) {
  if (c.y.empty()) throw ParseError("theta needs at least one --y");
  const Lattice l = load_working(c);
  ThetaOptions o;
  o.precision_bits = c.precision_bits;
  o.threads = c.threads;
  o.budget = budget_or(c, 1'000'000'000);
  std::vector<std::vector<std::string>> rows;
  for (double y : c.y) {
    const ThetaValue v = theta(l, y, o);
    const ThetaMinSum m = theta_min_sum(l, y, o);
    rows.push_back({format_sci(y, 15), format_sci(v.value, 20), format_sci(v.err, 3), format_sci(m.value, 20),
                    format_sci(m.err, 3), std::to_string(m.sign)});
  }
  emit(os, c.format, {"y", "theta", "theta_err", "S", "S_err", "S_sign"}, rows);
}

json to_json(const ExtremalityReport& r) {
  json doc;
  doc["lattice"] = r.lattice;
  doc["depth"] = r.depth;
  doc["seed"] = r.seed;
  doc["all_2_design"] = r.certificates.all_2_design;
  doc["all_4_design"] = r.certificates.all_4_design;
  doc["certificate_scope"] = r.certificates.scope_note;
  doc["strip_points"] = r.strip.grid_points;
  doc["strip_all_negative"] = r.strip.all_negative;
  doc["theta_y"] = format_sci(r.theta.y, 10);
  doc["theta_S"] = format_sci(r.theta.value, 12);
  doc["theta_S_err"] = format_sci(r.theta.err, 3);
  doc["theta_S_sign"] = r.theta.sign;
  json verdicts = json::array();
  for (const auto& v : r.verdicts) {
    json e;
    e["s"] = format_sci(v.s, 10);
    e["evidence"] = std::string(to_string(v.evidence));
    e["reason"] = v.reason;
    if (v.fit.step != 0) {
      e["zeta"] = format_sci(v.fit.zeta, 15);
      e["fitted_quadratic"] = format_sci(v.fit.quadratic, 15);
      e["predicted_quadratic"] = format_sci(v.fit.predicted, 15);
      e["relative_gap"] = format_sci(v.fit.relative_gap, 3);
      e["fitted_linear"] = format_sci(v.fit.linear, 3);
      e["linear_bound"] = format_sci(v.fit.linear_bound, 3);
    }
    verdicts.push_back(e);
  }
  doc["verdicts"] = verdicts;
  return doc;
}

void cmd_extremality(const RunConfig& c, std::ostream& os) {
  if (c.s.empty()) throw ParseError("extremality needs at least one --s");
  ExtremalityOptions o;
  o.seed = c.seed;
  o.step = c.step;
  o.strip_points = c.points;
  o.zeta = zeta_options(c);
  o.certification.threads = c.threads;
  o.certification.budget = budget_or(c, o.certification.budget);
  const ExtremalityReport r = extremality_report(load(c), c.s, c.depth, o);
  if (c.format == Format::json) {
    os << to_json(r).dump(2) << '\n';
  } else if (c.format == Format::csv) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& v : r.verdicts)
      rows.push_back({format_sci(v.s, 10), std::string(to_string(v.evidence)), format_sci(v.fit.quadratic, 15),
                      format_sci(v.fit.predicted, 15), format_sci(v.fit.relative_gap, 3)});
    emit(os, c.format, {"s", "evidence", "fitted_quadratic", "predicted_quadratic", "relative_gap"}, rows);
  } else {
    os << to_extremality_document(r);
  }
}

void cmd_strip(const RunConfig& c, std::ostream& os) {
  const Lattice l = rescale_to_covolume_one(load(c));
  const StripScan scan = strip_scan(l, c.points, zeta_options(c));
  if (c.format == Format::csv) return write_strip_csv(os, scan);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < scan.values.size(); ++i)
    rows.push_back({format_sci(scan.values[i].s, 15), format_sci(scan.values[i].value, 20),
                    format_sci(scan.values[i].err, 3), std::to_string(scan.signs[i])});
  emit(os, c.format, {"s", "zeta", "err", "sign"}, rows);
  if (c.format == Format::table) {
    os << "all negative: " << (scan.all_negative ? "yes" : "no") << '\n';
    for (const auto& [lo, hi] : scan.zero_brackets) os << "sign change in [" << format_sci(lo, 10) << ", " << format_sci(hi, 10) << "]\n";
  }
}

void cmd_catalog(const RunConfig& c, std::ostream& os) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& name : catalog_names()) {
    if (name == "Zn") {
      rows.push_back({name, "any (--dim)", "1"});
      continue;
    }
    const Lattice l = catalog_lattice(name);
    rows.push_back({name, std::to_string(l.dim()), to_string(l.gram().det())});
  }
  emit(os, c.format, {"name", "dim", "det"}, rows);
}

int exit_code(const std::exception& e) {
  if (dynamic_cast<const ResourceError*>(&e)) return 3;
  if (dynamic_cast<const PreconditionError*>(&e)) return 4;
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const CatalogError*>(&e) || dynamic_cast<const DomainError*>(&e))
    return 2;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice shells, spherical designs, Epstein zeta and theta functions"};
  app.require_subcommand(1);
  RunConfig c;
  const std::map<std::string, Format> formats{{"table", Format::table}, {"csv", Format::csv}, {"json", Format::json}};

  auto add_common = [&](CLI::App* sub, bool lattice) {
    if (lattice) {
      sub->add_option("--lattice", c.lattice, "catalog name");
      sub->add_option("--file", c.file, "lattice JSON file");
      sub->add_option("--dim", c.dim, "dimension for Zn");
    }
    sub->add_option("--precision-bits", c.precision_bits)->check(CLI::Range(53u, 4096u));
    sub->add_option("--threads", c.threads)->check(CLI::PositiveNumber);
    sub->add_option("--budget", c.budget, "maximum number of lattice vectors to enumerate");
    sub->add_option("--format", c.format)->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    sub->add_option("--out", c.out, "output path (default stdout)");
  };

  auto* shells = app.add_subcommand("shells", "shell table (k, m_k, a_k)");
  add_common(shells, true);
  shells->add_option("--depth", c.depth);
  shells->add_flag("--unit-covolume", c.unit_covolume, "rescale to covolume one first");

  auto* design = app.add_subcommand("design", "exact t-design certificates");
  add_common(design, true);
  design->add_option("--depth", c.depth);
  design->add_option("--t", c.t)->check(CLI::IsMember({2, 4, 6}));

  auto* zeta_cmd = app.add_subcommand("zeta", "Epstein zeta values");
  add_common(zeta_cmd, true);
  zeta_cmd->add_option("--s", c.s)->required();
  zeta_cmd->add_flag("--unit-covolume", c.unit_covolume, "rescale to covolume one first");

  auto* theta_cmd = app.add_subcommand("theta", "theta function and the sum S(y)");
  add_common(theta_cmd, true);
  theta_cmd->add_option("--y", c.y)->required();
  theta_cmd->add_flag("--unit-covolume", c.unit_covolume, "rescale to covolume one first");

  auto* extremality = app.add_subcommand("extremality", "zeta-extremality evidence on the covolume-one rescaling");
  add_common(extremality, true);
  extremality->add_option("--s", c.s)->required();
  extremality->add_option("--depth", c.depth, "certificate depth (default 3)");
  extremality->add_option("--seed", c.seed);
  extremality->add_option("--step", c.step)->check(CLI::PositiveNumber);
  extremality->add_option("--points", c.points, "strip grid points")->check(CLI::Range(2, 10000));

  auto* strip = app.add_subcommand("strip", "zeta sign scan on (0, n/2) at covolume one");
  add_common(strip, true);
  strip->add_option("--points", c.points)->check(CLI::Range(2, 10000));

  auto* catalog = app.add_subcommand("catalog", "list catalog lattices");
  add_common(catalog, false);

  const bool depth_given = [&] {
    for (int i = 1; i < argc; ++i)
      if (std::string_view(argv[i]).starts_with("--depth")) return true;
    return false;
  }();
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (extremality->parsed() && !depth_given) c.depth = 3;

  const std::map<CLI::App*, void (*)(const RunConfig&, std::ostream&)> commands{
      {shells, cmd_shells},   {design, cmd_design}, {zeta_cmd, cmd_zeta},       {theta_cmd, cmd_theta},
      {extremality, cmd_extremality}, {strip, cmd_strip}, {catalog, cmd_catalog}};
  try {
    std::ostringstream buffer;
    for (const auto& [sub, run] : commands)
      if (sub->parsed()) {
        c.command = sub->get_name();
        run(c, buffer);
      }
    if (c.out.empty()) {
      std::cout << buffer.str();
    } else {
      std::ofstream f(c.out);
      if (!f) throw ParseError("cannot write " + c.out);
      f << buffer.str();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  }
  return 0;
}

#include "nsfd/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "nsfd/errors.hpp"

namespace nsfd {

std::uint64_t fnv1a64(const void* data, std::size_t bytes) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

// Shortest round-trip decimal for a double.
std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field_payload(const std::string& path, double h, std::size_t points, int components,
                         const std::vector<double>& payload) {
  Json header;
  header["format"] = "nsfd-field";
  header["version"] = 1;
  header["h"] = h;
  header["points"] = points;
  header["components"] = components;
  header["checksum"] = hex64(fnv1a64(payload.data(), payload.size() * sizeof(double)));
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << header.dump() << "\n";
  os.write(reinterpret_cast<const char*>(payload.data()),
           static_cast<std::streamsize>(payload.size() * sizeof(double)));
  if (!os) throw IoError("short write to '" + path + "'");
}

}  // namespace

void write_field(const std::string& path, const VectorField& f) {
  std::vector<double> payload;
  payload.reserve(3 * f.dom().size());
  for (int c = 0; c < 3; ++c)
    payload.insert(payload.end(), f.comp(c).values().begin(), f.comp(c).values().end());
  write_field_payload(path, f.dom().h(), f.dom().size(), 3, payload);
}

void write_field(const std::string& path, const ScalarField& f) {
  write_field_payload(path, f.dom().h(), f.size(), 1, f.values());
}

FieldDump read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "'");
  std::string header_line;
  std::getline(is, header_line);
  Json header;
  try {
    header = Json::parse(header_line);
  } catch (const std::exception& e) {
    throw IoError("bad field header in '" + path + "': " + e.what());
  }
  if (header.value("format", "") != std::string("nsfd-field"))
    throw IoError("'" + path + "' is not a field dump");
  FieldDump d;
  d.h = header.at("h").get<double>();
  d.points = header.at("points").get<std::size_t>();
  d.components = header.at("components").get<int>();
  d.payload.resize(d.points * static_cast<std::size_t>(d.components));
  is.read(reinterpret_cast<char*>(d.payload.data()),
          static_cast<std::streamsize>(d.payload.size() * sizeof(double)));
  if (is.gcount() != static_cast<std::streamsize>(d.payload.size() * sizeof(double)))
    throw IoError("truncated field payload in '" + path + "'");
  std::string sum = hex64(fnv1a64(d.payload.data(), d.payload.size() * sizeof(double)));
  if (sum != header.at("checksum").get<std::string>())
    throw IoError("checksum mismatch in '" + path + "'");
  return d;
}

VectorField dump_to_vector_field(const FieldDump& d, std::shared_ptr<const GridDomain> g) {
  if (d.components != 3) throw IoError("expected a 3-component field dump");
  if (d.points != g->size())
    throw IoError("field dump has " + std::to_string(d.points) + " points, grid has " +
                  std::to_string(g->size()));
  VectorField f(std::move(g));
  for (int c = 0; c < 3; ++c)
    std::memcpy(f.comp(c).values().data(),
                d.payload.data() + static_cast<std::size_t>(c) * d.points,
                d.points * sizeof(double));
  return f;
}

ScalarField dump_to_scalar_field(const FieldDump& d, std::shared_ptr<const GridDomain> g) {
  if (d.components != 1) throw IoError("expected a scalar field dump");
  if (d.points != g->size()) throw IoError("field dump point count does not match grid");
  ScalarField f(std::move(g));
  std::memcpy(f.values().data(), d.payload.data(), d.points * sizeof(double));
  return f;
}

Json grid_summary(const GridDomain& g) {
  Json j;
  j["h"] = g.h();
  j["domain"] = g.spec().kind_name();
  j["points"] = g.size();
  j["interior"] = g.interior_count();
  j["boundary"] = g.boundary_count();
  j["interior_connected"] = g.interior_connected();
  j["coord_min"] = {g.coord_min()[0], g.coord_min()[1], g.coord_min()[2]};
  j["coord_max"] = {g.coord_max()[0], g.coord_max()[1], g.coord_max()[2]};
  Box bb = g.spec().bounding_box();
  j["bounding_box_lo"] = {bb.lo[0], bb.lo[1], bb.lo[2]};
  j["bounding_box_hi"] = {bb.hi[0], bb.hi[1], bb.hi[2]};
  return j;
}

void write_grid_points(const std::string& path, const GridDomain& g) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::int64_t c[3] = {g.coord(i)[0], g.coord(i)[1], g.coord(i)[2]};
    os.write(reinterpret_cast<const char*>(c), sizeof c);
    unsigned char flag = g.is_boundary(i) ? 0 : 1;
    os.write(reinterpret_cast<const char*>(&flag), 1);
  }
}

namespace {

const char* kLedgerHeader =
    "n,norm_u,norm_u_half,norm_u_next,sum_grad_sq,norm_f,slack_41,slack_42,slack_43,"
    "max_div_u_next,hodge_residual,hodge_iterations,momentum_residual,momentum_iterations,"
    "max_div_un,wall_ms";

std::string ledger_csv_impl(const RunLedger& ledger, bool timing) {
  std::ostringstream os;
  os << "# h=" << fmt_double(ledger.h) << " tau=" << fmt_double(ledger.tau)
     << " T=" << fmt_double(ledger.T) << " T_tau=" << ledger.T_tau
     << " norm_u0=" << fmt_double(ledger.norm_u0)
     << " norm_tilde_u0=" << fmt_double(ledger.norm_tilde_u0)
     << " norm_v0_l2=" << fmt_double(ledger.norm_v0_l2)
     << " norm_f_l2l2=" << fmt_double(ledger.norm_f_l2l2) << "\n";
  os << kLedgerHeader << "\n";
  for (const LedgerRow& r : ledger.rows) {
    os << r.n << ',' << fmt_double(r.norm_u) << ',' << fmt_double(r.norm_u_half) << ','
       << fmt_double(r.norm_u_next) << ',' << fmt_double(r.sum_grad_sq) << ','
       << fmt_double(r.norm_f) << ',' << fmt_double(r.slack_41) << ',' << fmt_double(r.slack_42)
       << ',' << fmt_double(r.slack_43) << ',' << fmt_double(r.max_div_u_next) << ','
       << fmt_double(r.hodge_residual) << ',' << r.hodge_iterations << ','
       << fmt_double(r.momentum_residual) << ',' << r.momentum_iterations << ','
       << fmt_double(r.max_div_un) << ',' << (timing ? fmt_double(r.wall_ms) : std::string())
       << "\n";
  }
  return os.str();
}

}  // namespace

std::string ledger_csv(const RunLedger& ledger) { return ledger_csv_impl(ledger, true); }
std::string ledger_csv_no_timing(const RunLedger& ledger) { return ledger_csv_impl(ledger, false); }

RunLedger parse_ledger_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  RunLedger ledger;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0)
    throw IoError("ledger CSV: missing metadata line");
  {
    std::istringstream meta(line.substr(2));
    std::string kv;
    while (meta >> kv) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) continue;
      std::string key = kv.substr(0, eq);
      double val = std::strtod(kv.c_str() + eq + 1, nullptr);
      if (key == "h") ledger.h = val;
      else if (key == "tau") ledger.tau = val;
      else if (key == "T") ledger.T = val;
      else if (key == "T_tau") ledger.T_tau = static_cast<int>(val);
      else if (key == "norm_u0") ledger.norm_u0 = val;
      else if (key == "norm_tilde_u0") ledger.norm_tilde_u0 = val;
      else if (key == "norm_v0_l2") ledger.norm_v0_l2 = val;
      else if (key == "norm_f_l2l2") ledger.norm_f_l2l2 = val;
    }
  }
  if (!std::getline(is, line) || line != kLedgerHeader)
    throw IoError("ledger CSV: unexpected column header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cellv;
    std::vector<std::string> cells;
    while (std::getline(row, cellv, ',')) cells.push_back(cellv);
    if (cells.size() < 15) throw IoError("ledger CSV: short row");
    LedgerRow r;
    int k = 0;
    auto next_d = [&] { return std::strtod(cells[static_cast<std::size_t>(k++)].c_str(), nullptr); };
    r.n = static_cast<int>(next_d());
    r.norm_u = next_d();
    r.norm_u_half = next_d();
    r.norm_u_next = next_d();
    r.sum_grad_sq = next_d();
    r.norm_f = next_d();
    r.slack_41 = next_d();
    r.slack_42 = next_d();
    r.slack_43 = next_d();
    r.max_div_u_next = next_d();
    r.hodge_residual = next_d();
    r.hodge_iterations = static_cast<int>(next_d());
    r.momentum_residual = next_d();
    r.momentum_iterations = static_cast<int>(next_d());
    r.max_div_un = next_d();
    r.wall_ms = cells.size() > 15 && !cells[15].empty()
                    ? std::strtod(cells[15].c_str(), nullptr)
                    : 0.0;
    ledger.rows.push_back(r);
  }
  return ledger;
}

Json run_summary(const RunResult& res) {
  Json j;
  j["h"] = res.ledger.h;
  j["tau"] = res.ledger.tau;
  j["T"] = res.ledger.T;
  j["T_tau"] = res.ledger.T_tau;
  j["grid_points"] = res.grid->size();
  j["grid_interior"] = res.grid->interior_count();
  j["norm_u0"] = res.ledger.norm_u0;
  j["norm_tilde_u0"] = res.ledger.norm_tilde_u0;
  j["norm_v0_l2"] = res.ledger.norm_v0_l2;
  j["norm_f_l2l2"] = res.ledger.norm_f_l2l2;
  double final_norm = res.ledger.rows.empty() ? res.ledger.norm_u0
                                              : res.ledger.rows.back().norm_u_next;
  j["final_norm"] = final_norm;
  double worst41 = 0, worst42 = 0, worst43 = 0, max_div = 0, wall = 0;
  bool first = true;
  for (const LedgerRow& r : res.ledger.rows) {
    if (first) {
      worst41 = r.slack_41;
      worst42 = r.slack_42;
      worst43 = r.slack_43;
      first = false;
    } else {
      worst41 = std::min(worst41, r.slack_41);
      worst42 = std::min(worst42, r.slack_42);
      worst43 = std::min(worst43, r.slack_43);
    }
    max_div = std::max(max_div, r.max_div_u_next);
    wall += r.wall_ms;
  }
  j["min_slack_41"] = worst41;
  j["min_slack_42"] = worst42;
  j["min_slack_43"] = worst43;
  j["max_div_u"] = max_div;
  j["timings"] = Json{{"total_wall_ms", wall}};
  return j;
}

void write_vtk(const std::string& path, const VectorField& f, const std::string& name) {
  const GridDomain& g = f.dom();
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  const Coord lo = g.coord_min(), hi = g.coord_max();
  const std::int64_t nx = hi[0] - lo[0] + 1, ny = hi[1] - lo[1] + 1, nz = hi[2] - lo[2] + 1;
  os << "# vtk DataFile Version 3.0\n" << name << "\nASCII\nDATASET STRUCTURED_POINTS\n";
  os << "DIMENSIONS " << nx << ' ' << ny << ' ' << nz << "\n";
  os << "ORIGIN " << fmt_double(g.h() * static_cast<double>(lo[0])) << ' '
     << fmt_double(g.h() * static_cast<double>(lo[1])) << ' '
     << fmt_double(g.h() * static_cast<double>(lo[2])) << "\n";
  os << "SPACING " << fmt_double(g.h()) << ' ' << fmt_double(g.h()) << ' ' << fmt_double(g.h())
     << "\n";
  os << "POINT_DATA " << nx * ny * nz << "\nVECTORS " << name << " double\n";
  for (std::int64_t z = lo[2]; z <= hi[2]; ++z)
    for (std::int64_t y = lo[1]; y <= hi[1]; ++y)
      for (std::int64_t x = lo[0]; x <= hi[0]; ++x) {
        std::int64_t i = g.find({x, y, z});
        if (i < 0) {
          os << "0 0 0\n";
        } else {
          std::size_t ii = static_cast<std::size_t>(i);
          os << fmt_double(f.comp(0)[ii]) << ' ' << fmt_double(f.comp(1)[ii]) << ' '
             << fmt_double(f.comp(2)[ii]) << "\n";
        }
      }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace nsfd

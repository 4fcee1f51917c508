#include "heisenframe/io.hpp"

#include <charconv>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace heisenframe {

namespace {

using nlohmann::json;

// Locale independent, and unlike stod it keeps subnormals instead of raising
// a range error, so %.17g text round trips every finite double.
double parse_double(const std::string& s) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw std::invalid_argument("not a number: " + s);
  }
  return v;
}

long parse_long(const std::string& s) {
  long v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw std::invalid_argument("not an integer: " + s);
  }
  return v;
}

json parse_header_line(std::istream& in, const std::string& magic,
                       const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) {
    throw io_error(path + ": missing header line");
  }
  json h = json::parse(line, nullptr, false);
  if (h.is_discarded() || !h.is_object()) {
    throw io_error(path + ": header is not valid JSON");
  }
  if (!h.contains("magic") || h["magic"] != magic) {
    throw io_error(path + ": bad magic, expected " + magic);
  }
  return h;
}

}  // namespace

void atomic_write_file(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open " + tmp + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw io_error("short write to " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw io_error("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

void write_grid_hgf1(const std::string& path, const GridFunction& f) {
  json h;
  h["magic"] = "HGF1";
  h["n"] = f.spec.n;
  h["axes"] = f.spec.counts;
  json box = json::array();
  for (const Interval& iv : f.spec.box) box.push_back({iv.lo, iv.hi});
  h["box"] = box;
  h["dtype"] = "c128le";

  std::string payload = h.dump();
  payload.push_back('\n');
  std::size_t head = payload.size();
  payload.resize(head + 16 * f.values.size());
  std::memcpy(payload.data() + head, f.values.data(), 16 * f.values.size());
  atomic_write_file(path, payload);
}

GridFunction read_grid_hgf1(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  json h = parse_header_line(in, "HGF1", path);

  GridFunction f;
  try {
    if (h.at("dtype") != "c128le") throw io_error(path + ": unsupported dtype");
    std::size_t n = h.at("n").get<std::size_t>();
    std::vector<std::size_t> counts = h.at("axes").get<std::vector<std::size_t>>();
    Box box;
    for (const auto& iv : h.at("box")) {
      box.push_back(Interval{iv.at(0).get<double>(), iv.at(1).get<double>()});
    }
    f.spec = GridSpec::over(n, box, counts);
  } catch (const io_error&) {
    throw;
  } catch (const std::exception& e) {
    throw io_error(path + ": bad header: " + e.what());
  }

  f.values.resize(f.spec.size());
  in.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(16 * f.values.size()));
  if (in.gcount() != static_cast<std::streamsize>(16 * f.values.size())) {
    throw io_error(path + ": truncated payload");
  }
  char extra;
  if (in.read(&extra, 1)) throw io_error(path + ": trailing bytes after payload");
  return f;
}

std::string convention_name(Convention c) {
  return c == Convention::kHaarNormalized ? "haar-normalized" : "lebesgue-raw";
}

namespace {

Convention convention_from(const std::string& name, const std::string& path) {
  if (name == "haar-normalized") return Convention::kHaarNormalized;
  if (name == "lebesgue-raw") return Convention::kLebesgueRaw;
  throw io_error(path + ": unknown convention " + name);
}

}  // namespace

void write_table_hct1(const std::string& path, const CoefficientTable& t) {
  json h;
  h["magic"] = "HCT1";
  h["n"] = t.n;
  h["K_xy"] = t.trunc.K_xy;
  h["K_t"] = t.trunc.K_t;
  h["convention"] = convention_name(t.convention);

  std::string out = h.dump();
  out.push_back('\n');
  std::vector<FrameIndex> idx = enumerate_indices(t.n, t.trunc);
  if (idx.size() != t.values.size()) {
    throw std::invalid_argument("write_table_hct1: table size does not match truncation");
  }
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (long a : idx[i].a) out += std::to_string(a) + ",";
    for (long a : idx[i].alpha) out += std::to_string(a) + ",";
    out += std::to_string(idx[i].k) + ",";
    out += format_g17(t.values[i].real()) + "," + format_g17(t.values[i].imag());
    out.push_back('\n');
  }
  atomic_write_file(path, out);
}

CoefficientTable read_table_hct1(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  json h = parse_header_line(in, "HCT1", path);

  CoefficientTable t;
  try {
    t.n = h.at("n").get<std::size_t>();
    t.trunc = Truncation(h.at("K_xy").get<int>(), h.at("K_t").get<int>());
    t.convention = convention_from(h.at("convention").get<std::string>(), path);
  } catch (const io_error&) {
    throw;
  } catch (const std::exception& e) {
    throw io_error(path + ": bad header: " + e.what());
  }

  std::vector<FrameIndex> idx = enumerate_indices(t.n, t.trunc);
  t.values.reserve(idx.size());
  std::string line;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (!std::getline(in, line)) throw io_error(path + ": missing rows");
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 2 * t.n + 3) throw io_error(path + ": malformed row " + std::to_string(i));
    std::size_t pos = 0;
    try {
      for (std::size_t d = 0; d < t.n; ++d) {
        if (parse_long(fields[pos++]) != idx[i].a[d]) throw io_error(path + ": row order mismatch");
      }
      for (std::size_t d = 0; d < t.n; ++d) {
        if (parse_long(fields[pos++]) != idx[i].alpha[d]) throw io_error(path + ": row order mismatch");
      }
      if (parse_long(fields[pos++]) != idx[i].k) throw io_error(path + ": row order mismatch");
      double re = parse_double(fields[pos++]);
      double im = parse_double(fields[pos]);
      t.values.emplace_back(re, im);
    } catch (const io_error&) {
      throw;
    } catch (const std::exception&) {
      throw io_error(path + ": malformed row " + std::to_string(i));
    }
  }
  if (std::getline(in, line) && !line.empty()) {
    throw io_error(path + ": trailing rows");
  }
  return t;
}

std::string bounds_report_json(const BoundsReport& rep) {
  json j;
  j["A_est"] = rep.A_est;
  j["B_est"] = rep.B_est;
  j["C_M"] = rep.C_M;
  j["T_est"] = rep.T_est;
  j["envelope_lo"] = rep.envelope_lo;
  j["envelope_hi"] = rep.envelope_hi;
  j["condition_number"] = rep.condition_number;
  j["deviation"] = rep.deviation;
  j["degenerate_lower"] = rep.degenerate_lower;
  j["weighted"] = rep.weighted;
  j["K_xy"] = rep.K_xy;
  j["K_t"] = rep.K_t;
  j["index_count"] = rep.index_count;
  return j.dump();
}

}  // namespace heisenframe

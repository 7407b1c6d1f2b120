#pragma once

// Analytical latency / throughput / utilization model for the array, plus
// the FPGA device catalog and the sweep grids behind the result figures.
//
// Latency (us)       = cycles / Fmax(MHz)
// Throughput (Gbps)  = (bits / latency_us) / 1e6
//
// The throughput expression is kept exactly as published even though
// bits/us / 1e6 is not SI Gbps; the figures were produced with it.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spime/aes_core.hpp"
#include "spime/error.hpp"

namespace spime {

/// Array size at which the utilization anchors were reported.
inline constexpr double kAnchorPims = 4096.0;

struct DeviceSpec {
  std::string name;
  std::string part;
  double luts = 0;  // absolute counts, not thousands
  double ffs = 0;
  double bram = 0;
  double uram = 0;
  double dsps = 0;
  double per_pim_lut_cost = 0;  // calibrated; 0 means uncalibrated
  double per_pim_ff_cost = 0;

  /// Derive per-unit costs from utilization percentages observed at the
  /// anchor array size.
  void calibrate(double lut_pct_at_anchor, double ff_pct_at_anchor) {
    per_pim_lut_cost = luts * lut_pct_at_anchor / 100.0 / kAnchorPims;
    per_pim_ff_cost = ffs * ff_pct_at_anchor / 100.0 / kAnchorPims;
  }
};

// LUT anchors are reported values; FF anchors are the bounds "sub-2%" and
// "nearly 10%" taken at face value, so FF figures are approximate.
inline constexpr double kDataCenterLutAnchorPct = 3.65;
inline constexpr double kDataCenterFfAnchorPct = 2.0;
inline constexpr double kEmbeddedLutAnchorPct = 18.44;
inline constexpr double kEmbeddedFfAnchorPct = 10.0;

inline DeviceSpec make_device(std::string name, std::string part, double luts_k, double ffs_k,
                              double bram, double uram, double dsps, double lut_pct,
                              double ff_pct) {
  DeviceSpec d{std::move(name), std::move(part), luts_k * 1000.0, ffs_k * 1000.0, bram, uram, dsps};
  d.calibrate(lut_pct, ff_pct);
  return d;
}

/// The five evaluation boards.
inline std::vector<DeviceSpec> builtin_catalog() {
  return {
      make_device("U55C", "xcu55c-fsvh2892-2L-e", 1304, 2607, 2016, 960, 9024,
                  kDataCenterLutAnchorPct, kDataCenterFfAnchorPct),
      make_device("U280", "xcu280-fsvh2892-2L-e", 1304, 2607, 2016, 960, 9024,
                  kDataCenterLutAnchorPct, kDataCenterFfAnchorPct),
      make_device("VCU118", "xcvu9p-flga2104-2L-e", 1182, 2364, 2160, 960, 6840,
                  kDataCenterLutAnchorPct, kDataCenterFfAnchorPct),
      make_device("ZCU104", "xczu7ev-ffvc1156-2-e", 230, 460, 312, 96, 1728,
                  kEmbeddedLutAnchorPct, kEmbeddedFfAnchorPct),
      make_device("ZCU106", "xczu7ev-ffvc1156-2-e", 230, 460, 312, 96, 1728,
                  kEmbeddedLutAnchorPct, kEmbeddedFfAnchorPct),
  };
}

inline constexpr std::string_view kCatalogHeader =
    "name,part,luts_k,ffs_k,bram,uram,dsps,lut_pct_at_4096,ff_pct_at_4096";

/// Catalog CSV: kCatalogHeader, then one device per row. The two
/// calibration columns may be omitted, leaving the device uncalibrated.
inline std::vector<DeviceSpec> load_catalog(std::istream& is) {
  std::vector<DeviceSpec> out;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.rfind("name,", 0) == 0) continue;
    }
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    if (cols.size() != 7 && cols.size() != 9) {
      throw ParseError("expected 7 or 9 columns, got " + std::to_string(cols.size()), lineno);
    }
    auto num = [&](std::size_t i) {
      char* end = nullptr;
      const double v = std::strtod(cols[i].c_str(), &end);
      if (cols[i].empty() || *end != '\0' || !(v > 0)) {
        throw ParseError("column " + std::to_string(i + 1) + " is not a positive number: '" +
                         cols[i] + "'", lineno);
      }
      return v;
    };
    DeviceSpec d{cols[0], cols[1], num(2) * 1000.0, num(3) * 1000.0, num(4), num(5), num(6)};
    if (cols.size() == 9) d.calibrate(num(7), num(8));
    out.push_back(std::move(d));
  }
  if (out.empty()) throw ParseError("device catalog is empty");
  return out;
}

inline void write_catalog(std::ostream& os, const std::vector<DeviceSpec>& devices) {
  os << kCatalogHeader << '\n';
  for (const auto& d : devices) {
    os << d.name << ',' << d.part << ',' << d.luts / 1000.0 << ',' << d.ffs / 1000.0 << ','
       << d.bram << ',' << d.uram << ',' << d.dsps;
    if (d.per_pim_lut_cost > 0 && d.per_pim_ff_cost > 0) {
      os << ',' << d.per_pim_lut_cost * kAnchorPims / d.luts * 100.0 << ','
         << d.per_pim_ff_cost * kAnchorPims / d.ffs * 100.0;
    }
    os << '\n';
  }
}

inline constexpr const char* kCatalogEnvVar = "SPIME_DEVICE_CATALOG";

/// Catalog named by $SPIME_DEVICE_CATALOG, or the built-in one.
inline std::vector<DeviceSpec> default_catalog() {
  const char* path = std::getenv(kCatalogEnvVar);
  if (path == nullptr || *path == '\0') return builtin_catalog();
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure(std::string("cannot open device catalog ") + path);
  return load_catalog(in);
}

inline const DeviceSpec& find_device(const std::vector<DeviceSpec>& catalog, std::string_view name) {
  for (const auto& d : catalog)
    if (d.name == name) return d;
  throw ConfigError("unknown device '" + std::string(name) + "'");
}

enum class Resource { Lut, Ff };

inline Resource parse_resource(std::string_view s) {
  if (s == "LUT" || s == "lut") return Resource::Lut;
  if (s == "FF" || s == "ff") return Resource::Ff;
  throw ConfigError("unknown resource kind '" + std::string(s) + "'");
}

inline double latency_us(double cycles, double fmax_mhz) {
  if (!(fmax_mhz > 0)) throw ConfigError("fmax_mhz must be positive");
  if (!(cycles > 0)) throw ConfigError("cycles must be positive");
  return cycles / fmax_mhz;
}

inline double throughput_gbps(double total_bits, double latency_us) {
  if (!(latency_us > 0)) throw ConfigError("latency_us must be positive");
  if (total_bits < 0) throw ConfigError("total_bits must be nonnegative");
  return (total_bits / latency_us) / 1e6;
}

inline double utilization_pct(const DeviceSpec& device, double num_pims, Resource resource) {
  if (!(num_pims > 0)) throw ConfigError("num_pims must be positive");
  const double cost = resource == Resource::Lut ? device.per_pim_lut_cost : device.per_pim_ff_cost;
  const double capacity = resource == Resource::Lut ? device.luts : device.ffs;
  if (!(cost > 0) || !(capacity > 0)) {
    throw ConfigError("device '" + device.name + "' is not calibrated for " +
                      (resource == Resource::Lut ? "LUT" : "FF"));
  }
  return num_pims * cost / capacity * 100.0;
}

struct PerfQuery {
  unsigned num_pims = 4096;
  double fmax_mhz = 500;
  unsigned cycles_per_task = AesCoreSim::kCyclesPerBlock;
  unsigned block_bits = 1024;  // per unit, multiple of 128
};

struct PerfResult {
  double latency_us = 0;  // one 128-bit task
  double throughput_gbps = 0;
  double lut_util_pct = 0;
  double ff_util_pct = 0;
};

/// Aggregate: bits = num_pims * block_bits over one unit's batch latency,
/// which is the reading that reproduces the published array throughput.
/// PerUnit: bits = block_bits over the same latency.
enum class ThroughputMode { Aggregate, PerUnit };

inline PerfResult evaluate(const PerfQuery& q, const DeviceSpec& device,
                           ThroughputMode mode = ThroughputMode::Aggregate) {
  if (q.num_pims == 0) throw ConfigError("num_pims must be positive");
  if (q.block_bits == 0 || q.block_bits % 128 != 0) {
    throw ConfigError("block_bits must be a positive multiple of 128, got " +
                      std::to_string(q.block_bits));
  }
  PerfResult r;
  r.latency_us = latency_us(q.cycles_per_task, q.fmax_mhz);
  const double batch_latency = latency_us(double(q.cycles_per_task) * (q.block_bits / 128), q.fmax_mhz);
  const double bits = mode == ThroughputMode::Aggregate ? double(q.num_pims) * q.block_bits
                                                        : double(q.block_bits);
  r.throughput_gbps = throughput_gbps(bits, batch_latency);
  r.lut_util_pct = utilization_pct(device, q.num_pims, Resource::Lut);
  r.ff_util_pct = utilization_pct(device, q.num_pims, Resource::Ff);
  return r;
}

struct SweepPoint {
  PerfQuery query;
  DeviceSpec device;
};

struct SweepRow {
  SweepPoint point;
  PerfResult result;
};

/// One row per point, in input order. Errors carry the failing index.
inline std::vector<SweepRow> sweep(const std::vector<SweepPoint>& points,
                                   ThroughputMode mode = ThroughputMode::Aggregate) {
  std::vector<SweepRow> rows;
  rows.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    try {
      rows.push_back({points[i], evaluate(points[i].query, points[i].device, mode)});
    } catch (const ConfigError& e) {
      throw ConfigError("query " + std::to_string(i) + ": " + e.what());
    }
  }
  return rows;
}

/// Cartesian grid, devices outermost, then fmax, num_pims, block_bits.
inline std::vector<SweepPoint> make_grid(const std::vector<DeviceSpec>& devices,
                                         const std::vector<double>& fmax_mhz,
                                         const std::vector<unsigned>& num_pims,
                                         const std::vector<unsigned>& block_bits,
                                         unsigned cycles_per_task = AesCoreSim::kCyclesPerBlock) {
  if (devices.empty() || fmax_mhz.empty() || num_pims.empty() || block_bits.empty()) {
    throw ConfigError("sweep ranges must be nonempty");
  }
  std::vector<SweepPoint> pts;
  for (const auto& d : devices)
    for (double f : fmax_mhz)
      for (unsigned n : num_pims)
        for (unsigned b : block_bits) pts.push_back({PerfQuery{n, f, cycles_per_task, b}, d});
  return pts;
}

inline const std::vector<unsigned> kPaperPimCounts = {256, 512, 1024, 2048, 4096};
inline const std::vector<double> kPaperFmaxMhz = {100, 300, 500};
inline const std::vector<unsigned> kPaperBlockBits = {1024, 4096, 16384, 65536};

/// Grids behind each result figure: 3 (LUT) and 4 (FF) utilization per
/// device, 5 latency vs Fmax, 6 throughput vs unit count at 1024-bit
/// blocks, 7 throughput vs block size.
inline std::vector<SweepPoint> figure_grid(int figure, const std::vector<DeviceSpec>& catalog) {
  const std::vector<DeviceSpec> reference = {find_device(catalog, "U55C")};
  switch (figure) {
    case 3:
    case 4:
      return make_grid(catalog, {500}, kPaperPimCounts, {1024});
    case 5:
      return make_grid(reference, kPaperFmaxMhz, kPaperPimCounts, {128});
    case 6:
      return make_grid(reference, kPaperFmaxMhz, {1024, 2048, 4096}, {1024});
    case 7:
      return make_grid(reference, kPaperFmaxMhz, kPaperPimCounts, kPaperBlockBits);
    default:
      throw ConfigError("no preset for figure " + std::to_string(figure) + " (expected 3-7)");
  }
}

inline constexpr std::string_view kSweepCsvHeader =
    "device,num_pims,fmax_mhz,block_bits,latency_us,throughput_gbps,lut_util_pct,ff_util_pct";

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kSweepCsvHeader << '\n';
  for (const auto& [pt, r] : rows) {
    os << pt.device.name << ',' << pt.query.num_pims << ',' << format_number(pt.query.fmax_mhz)
       << ',' << pt.query.block_bits << ',' << format_number(r.latency_us) << ','
       << format_number(r.throughput_gbps) << ',' << format_number(r.lut_util_pct) << ','
       << format_number(r.ff_util_pct) << '\n';
  }
}

}  // namespace spime

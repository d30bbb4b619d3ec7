#pragma once

// On-disk formats and configuration.
//   - configs and reports: JSON (strict schema, unknown keys rejected)
//   - time series: CSV, one ObservableFrame per row, 17 significant digits
//   - checkpoints: raw little-endian binary, magic "QSYN1", bit-exact resume
// Every file is written to a temp path and atomically renamed into place.

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsync/observables.hpp"
#include "qsync/state.hpp"

namespace qsync {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Filesystem plumbing

inline void atomic_write_file(const std::string& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + target.parent_path().string());
  }
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out.good()) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("short write to " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename " + tmp.string() + " to " + path);
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Run configuration

struct GaussianInit {
  std::vector<double> center{0.0};
  std::vector<double> momentum{0.0};
  double width = 1.0;
  double amplitude = 1.0;
  double phase = 0.0;
};

struct InitialSpec {
  bool is_scenario = false;
  std::string scenario_name;
  std::uint64_t seed = 0;
  std::vector<GaussianInit> oscillators;
  std::vector<double> thetas;
  bool rescale_thetas = false;
};

struct OutputSpec {
  std::string directory = "qsync_out";
  long long sample_every = 10;
  std::vector<std::string> formats{"csv", "json"};
};

struct RunConfig {
  GridSpec grid = GridSpec::create(1, 256, 20.0);
  ModelParams model;
  InitialSpec initial;
  OutputSpec output;
};

namespace detail {

inline void reject_unknown_keys(const Json& obj, const std::vector<std::string>& allowed,
                                const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const std::string& a : allowed) ok = ok || key == a;
    if (!ok)
      throw ConfigError("config: unknown key \"" + key + "\" in " + where);
  }
}

template <typename T>
T get_or(const Json& obj, const std::string& key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError("config: key \"" + key + "\" in " + where + " has the wrong type");
  }
}

inline KernelSpec parse_kernel(const Json& j) {
  std::string kind = get_or<std::string>(j, "kind", "heavy_tail", "kernel");
  if (kind == "constant") {
    reject_unknown_keys(j, {"kind", "value"}, "kernel");
    return KernelSpec::constant(get_or<double>(j, "value", 1.0, "kernel"));
  }
  if (kind == "absolute") {
    reject_unknown_keys(j, {"kind", "c_floor", "amp", "gamma"}, "kernel");
    return KernelSpec::absolute(get_or<double>(j, "c_floor", 0.5, "kernel"),
                                get_or<double>(j, "amp", 0.5, "kernel"),
                                get_or<double>(j, "gamma", 1.0, "kernel"));
  }
  if (kind == "heavy_tail") {
    reject_unknown_keys(j, {"kind", "gamma"}, "kernel");
    return KernelSpec::heavy_tail(get_or<double>(j, "gamma", 1.0, "kernel"));
  }
  if (kind == "tabulated") {
    reject_unknown_keys(j, {"kind", "radii", "values"}, "kernel");
    return KernelSpec::tabulated(
        get_or<std::vector<double>>(j, "radii", {}, "kernel"),
        get_or<std::vector<double>>(j, "values", {}, "kernel"));
  }
  throw ConfigError("config: kernel kind must be one of constant/absolute/heavy_tail/"
                    "tabulated, got \"" + kind + "\"");
}

inline PotentialSpec parse_potential(const Json& j) {
  std::string kind = get_or<std::string>(j, "kind", "zero", "potential");
  if (kind == "zero") {
    reject_unknown_keys(j, {"kind"}, "potential");
    return PotentialSpec::zero();
  }
  if (kind == "harmonic") {
    reject_unknown_keys(j, {"kind", "omega"}, "potential");
    return PotentialSpec::harmonic(get_or<double>(j, "omega", 1.0, "potential"));
  }
  if (kind == "tabulated") {
    reject_unknown_keys(j, {"kind", "samples"}, "potential");
    return PotentialSpec::tabulated(
        get_or<std::vector<double>>(j, "samples", {}, "potential"));
  }
  throw ConfigError("config: potential kind must be one of zero/harmonic/tabulated, got \"" +
                    kind + "\"");
}

inline ModelKind parse_model_kind(const std::string& s) {
  if (s == "standard_sl") return ModelKind::StandardSL;
  if (s == "model1") return ModelKind::Model1;
  if (s == "model2") return ModelKind::Model2;
  throw ConfigError("config: model kind must be one of standard_sl/model1/model2, got \"" +
                    s + "\"");
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  detail::reject_unknown_keys(root, {"grid", "model", "initial", "output"}, "top level");

  RunConfig cfg;

  Json jgrid = root.value("grid", Json::object());
  detail::reject_unknown_keys(jgrid, {"dim", "points_per_dim", "half_width"}, "grid");
  cfg.grid = GridSpec::create(detail::get_or<int>(jgrid, "dim", 1, "grid"),
                              detail::get_or<int>(jgrid, "points_per_dim", 256, "grid"),
                              detail::get_or<double>(jgrid, "half_width", 20.0, "grid"));

  Json jmodel = root.value("model", Json::object());
  detail::reject_unknown_keys(
      jmodel, {"kind", "k", "mu", "omegas", "kernel", "potential", "dt", "t_final"},
      "model");
  cfg.model.kind = detail::parse_model_kind(
      detail::get_or<std::string>(jmodel, "kind", "model1", "model"));
  cfg.model.k = detail::get_or<double>(jmodel, "k", 1.0, "model");
  cfg.model.mu = detail::get_or<double>(jmodel, "mu", 1.0, "model");
  cfg.model.omegas = detail::get_or<std::vector<double>>(jmodel, "omegas", {}, "model");
  cfg.model.kernel = detail::parse_kernel(jmodel.value("kernel", Json::object()));
  cfg.model.potential = detail::parse_potential(jmodel.value("potential", Json::object()));
  cfg.model.dt = detail::get_or<double>(jmodel, "dt", 1e-3, "model");
  cfg.model.t_final = detail::get_or<double>(jmodel, "t_final", 10.0, "model");
  if (!(cfg.model.dt > 0.0) || !(cfg.model.t_final >= cfg.model.dt))
    throw ConfigError("config: model requires dt > 0 and t_final >= dt");
  if (!(cfg.model.k > 0.0)) throw ConfigError("config: model.k must be positive");
  if (cfg.model.mu < 0.0) throw ConfigError("config: model.mu must be nonnegative");

  if (!root.contains("initial"))
    throw ConfigError("config: missing required section \"initial\"");
  Json jinit = root.at("initial");
  bool has_scenario = jinit.contains("scenario");
  bool has_explicit = jinit.contains("oscillators");
  if (has_scenario == has_explicit)
    throw ConfigError("config: initial must specify exactly one of \"scenario\" or "
                      "\"oscillators\"");
  if (has_scenario) {
    detail::reject_unknown_keys(jinit, {"scenario"}, "initial");
    Json js = jinit.at("scenario");
    detail::reject_unknown_keys(js, {"name", "seed"}, "initial.scenario");
    cfg.initial.is_scenario = true;
    if (!js.contains("name"))
      throw ConfigError("config: initial.scenario.name is required");
    cfg.initial.scenario_name = js.at("name").get<std::string>();
    cfg.initial.seed = detail::get_or<std::uint64_t>(js, "seed", 0, "initial.scenario");
  } else {
    detail::reject_unknown_keys(jinit, {"oscillators", "thetas", "rescale_thetas"},
                                "initial");
    cfg.initial.is_scenario = false;
    for (const Json& jo : jinit.at("oscillators")) {
      detail::reject_unknown_keys(jo, {"center", "momentum", "width", "amplitude", "phase"},
                                  "initial.oscillators[]");
      GaussianInit g;
      g.center = detail::get_or<std::vector<double>>(jo, "center",
                                                     std::vector<double>(cfg.grid.dim, 0.0),
                                                     "oscillator");
      g.momentum = detail::get_or<std::vector<double>>(
          jo, "momentum", std::vector<double>(cfg.grid.dim, 0.0), "oscillator");
      g.width = detail::get_or<double>(jo, "width", 1.0, "oscillator");
      g.amplitude = detail::get_or<double>(jo, "amplitude", 1.0, "oscillator");
      g.phase = detail::get_or<double>(jo, "phase", 0.0, "oscillator");
      cfg.initial.oscillators.push_back(std::move(g));
    }
    if (cfg.initial.oscillators.empty())
      throw ConfigError("config: initial.oscillators must be nonempty");
    cfg.initial.thetas = detail::get_or<std::vector<double>>(
        jinit, "thetas", std::vector<double>(cfg.initial.oscillators.size(), 1.0),
        "initial");
    cfg.initial.rescale_thetas =
        detail::get_or<bool>(jinit, "rescale_thetas", false, "initial");
    if (cfg.initial.thetas.size() != cfg.initial.oscillators.size())
      throw ConfigError("config: initial.thetas length must match oscillators");
    double mean = 0.0;
    for (double t : cfg.initial.thetas) {
      if (!(t > 0.0)) throw ConfigError("config: thetas must be strictly positive");
      mean += t;
    }
    mean /= static_cast<double>(cfg.initial.thetas.size());
    if (cfg.initial.rescale_thetas) {
      for (double& t : cfg.initial.thetas) t /= mean;
    } else if (std::abs(mean - 1.0) > 1e-12) {
      throw ConfigError("config: thetas must have mean 1 (or set rescale_thetas)");
    }
    if (!cfg.model.omegas.empty() &&
        cfg.model.omegas.size() != cfg.initial.oscillators.size())
      throw ConfigError("config: model.omegas length must match oscillators");
  }

  Json jout = root.value("output", Json::object());
  detail::reject_unknown_keys(jout, {"directory", "sample_every", "formats"}, "output");
  cfg.output.directory =
      detail::get_or<std::string>(jout, "directory", "qsync_out", "output");
  cfg.output.sample_every =
      detail::get_or<long long>(jout, "sample_every", 10, "output");
  if (cfg.output.sample_every < 1)
    throw ConfigError("config: output.sample_every must be >= 1");
  cfg.output.formats = detail::get_or<std::vector<std::string>>(
      jout, "formats", {"csv", "json"}, "output");
  return cfg;
}

inline std::string emit_config(const RunConfig& cfg) {
  Json j;
  j["grid"] = {{"dim", cfg.grid.dim},
               {"points_per_dim", cfg.grid.points_per_dim},
               {"half_width", cfg.grid.half_width}};
  Json jk;
  switch (cfg.model.kernel.kind) {
    case KernelSpec::Kind::Constant:
      jk = {{"kind", "constant"}, {"value", cfg.model.kernel.constant_value}};
      break;
    case KernelSpec::Kind::Absolute:
      jk = {{"kind", "absolute"},
            {"c_floor", cfg.model.kernel.c_floor},
            {"amp", cfg.model.kernel.amp},
            {"gamma", cfg.model.kernel.gamma}};
      break;
    case KernelSpec::Kind::HeavyTail:
      jk = {{"kind", "heavy_tail"}, {"gamma", cfg.model.kernel.gamma}};
      break;
    case KernelSpec::Kind::Tabulated:
      jk = {{"kind", "tabulated"},
            {"radii", cfg.model.kernel.radii},
            {"values", cfg.model.kernel.values}};
      break;
  }
  Json jp;
  switch (cfg.model.potential.kind) {
    case PotentialSpec::Kind::Zero:
      jp = {{"kind", "zero"}};
      break;
    case PotentialSpec::Kind::Harmonic:
      jp = {{"kind", "harmonic"}, {"omega", cfg.model.potential.omega}};
      break;
    case PotentialSpec::Kind::Tabulated:
      jp = {{"kind", "tabulated"}, {"samples", cfg.model.potential.samples}};
      break;
  }
  j["model"] = {{"kind", to_string(cfg.model.kind)},
                {"k", cfg.model.k},
                {"mu", cfg.model.mu},
                {"omegas", cfg.model.omegas},
                {"kernel", jk},
                {"potential", jp},
                {"dt", cfg.model.dt},
                {"t_final", cfg.model.t_final}};
  if (cfg.initial.is_scenario) {
    j["initial"] = {
        {"scenario", {{"name", cfg.initial.scenario_name}, {"seed", cfg.initial.seed}}}};
  } else {
    Json osc = Json::array();
    for (const GaussianInit& g : cfg.initial.oscillators)
      osc.push_back({{"center", g.center},
                     {"momentum", g.momentum},
                     {"width", g.width},
                     {"amplitude", g.amplitude},
                     {"phase", g.phase}});
    j["initial"] = {{"oscillators", osc},
                    {"thetas", cfg.initial.thetas},
                    {"rescale_thetas", false}};  // thetas are stored normalized
  }
  j["output"] = {{"directory", cfg.output.directory},
                 {"sample_every", cfg.output.sample_every},
                 {"formats", cfg.output.formats}};
  return j.dump(2) + "\n";
}

// Gaussian-parameter initial data.
inline EnsembleState build_explicit_state(const RunConfig& cfg) {
  if (cfg.initial.is_scenario)
    throw ConfigError("build_explicit_state: config specifies scenario initial data");
  EnsembleState s;
  for (const GaussianInit& g : cfg.initial.oscillators)
    s.fields.push_back(
        gaussian_packet(cfg.grid, g.center, g.momentum, g.width, g.amplitude, g.phase));
  s.theta.values = cfg.initial.thetas;
  return s;
}

// ---------------------------------------------------------------------------
// Trajectory CSV

namespace detail {

inline std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string trajectory_header(std::size_t n, int dim) {
  std::string h = "time";
  for (std::size_t j = 1; j <= n; ++j) h += ",lambda_" + std::to_string(j);
  for (std::size_t j = 1; j <= n; ++j) h += ",theta_" + std::to_string(j);
  for (std::size_t j = 1; j <= n; ++j) {
    if (dim == 1) {
      h += ",x_" + std::to_string(j);
    } else {
      for (int c = 1; c <= dim; ++c)
        h += ",x_" + std::to_string(j) + "_" + std::to_string(c);
    }
  }
  h += ",zeta_norm,min_corr,theta_spread,diameter";
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t k = j + 1; k <= n; ++k)
      h += ",corr_re_" + std::to_string(j) + "_" + std::to_string(k);
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t k = j + 1; k <= n; ++k)
      h += ",corr_im_" + std::to_string(j) + "_" + std::to_string(k);
  return h;
}

}  // namespace detail

inline void write_trajectory(const std::string& path,
                             const std::vector<ObservableFrame>& frames, std::size_t n,
                             int dim) {
  std::string out = detail::trajectory_header(n, dim) + "\n";
  for (const ObservableFrame& fr : frames) {
    if (fr.size() != n)
      throw IoError("trajectory: frame oscillator count does not match header");
    std::string row = detail::format_g17(fr.time);
    for (std::size_t j = 0; j < n; ++j) row += "," + detail::format_g17(fr.masses[j]);
    for (std::size_t j = 0; j < n; ++j) row += "," + detail::format_g17(fr.thetas[j]);
    for (std::size_t j = 0; j < n; ++j)
      for (int c = 0; c < dim; ++c) row += "," + detail::format_g17(fr.centers[j][c]);
    row += "," + detail::format_g17(fr.zeta_norm);
    row += "," + detail::format_g17(fr.min_corr);
    row += "," + detail::format_g17(fr.theta_spread);
    row += "," + detail::format_g17(fr.diameter);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        row += "," + detail::format_g17(fr.corr_re[j][k]);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        row += "," + detail::format_g17(fr.corr_im[j][k]);
    out += row + "\n";
  }
  atomic_write_file(path, out);
}

struct TrajectoryData {
  std::size_t n_osc = 0;
  int dim = 1;
  std::vector<ObservableFrame> frames;
};

inline TrajectoryData read_trajectory(const std::string& path) {
  std::string text = read_file(path);
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header)) throw ParseError(path + " line 1: missing header");

  std::size_t n = 0;
  int dim = 0;
  {
    std::istringstream hs(header);
    std::string tok;
    std::size_t x_cols = 0;
    while (std::getline(hs, tok, ',')) {
      if (tok.rfind("lambda_", 0) == 0) ++n;
      if (tok.rfind("x_", 0) == 0) ++x_cols;
    }
    if (n == 0) throw ParseError(path + " line 1: no lambda columns in header");
    if (x_cols % n != 0) throw ParseError(path + " line 1: malformed center columns");
    dim = static_cast<int>(x_cols / n);
  }
  if (header != detail::trajectory_header(n, dim))
    throw ParseError(path + " line 1: header does not match the trajectory schema");

  std::size_t n_cols = 1 + 2 * n + n * static_cast<std::size_t>(dim) + 4 + n * (n - 1);
  TrajectoryData data;
  data.n_osc = n;
  data.dim = dim;
  std::string line;
  std::size_t line_no = 1;
  double prev_time = 0.0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> vals;
    vals.reserve(n_cols);
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      char* end = nullptr;
      double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0')
        throw ParseError(path + " line " + std::to_string(line_no) +
                         ": bad number \"" + cell + "\"");
      vals.push_back(v);
    }
    if (vals.size() != n_cols)
      throw ParseError(path + " line " + std::to_string(line_no) + ": expected " +
                       std::to_string(n_cols) + " columns, got " +
                       std::to_string(vals.size()));
    ObservableFrame fr;
    std::size_t c = 0;
    fr.time = vals[c++];
    if (!data.frames.empty() && fr.time <= prev_time)
      throw ParseError(path + " line " + std::to_string(line_no) +
                       ": time column must be strictly increasing");
    prev_time = fr.time;
    fr.masses.assign(vals.begin() + c, vals.begin() + c + n);
    c += n;
    fr.thetas.assign(vals.begin() + c, vals.begin() + c + n);
    c += n;
    fr.centers.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      fr.centers[j] = {0.0, 0.0};
      for (int d = 0; d < dim; ++d) fr.centers[j][d] = vals[c++];
    }
    fr.zeta_norm = vals[c++];
    fr.min_corr = vals[c++];
    fr.theta_spread = vals[c++];
    fr.diameter = vals[c++];
    fr.corr_re.assign(n, std::vector<double>(n, 0.0));
    fr.corr_im.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) fr.corr_re[j][j] = 1.0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        fr.corr_re[j][k] = fr.corr_re[k][j] = vals[c++];
      }
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        fr.corr_im[j][k] = vals[c];
        fr.corr_im[k][j] = -vals[c];
        ++c;
      }
    data.frames.push_back(std::move(fr));
  }
  return data;
}

// ---------------------------------------------------------------------------
// Checkpoints ("QSYN1": little-endian header, theta array, interleaved re/im)

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_f64(std::string& out, double d) {
  std::uint64_t v = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

struct ByteReader {
  const std::string& buf;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > buf.size())
      throw ParseError("checkpoint: truncated file (need " + std::to_string(n) +
                       " bytes at offset " + std::to_string(pos) + ")");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
    pos += 4;
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
    pos += 8;
    return std::bit_cast<double>(v);
  }
};

}  // namespace detail

inline std::string checkpoint_bytes(const EnsembleState& s) {
  std::string out = "QSYN1";
  const GridSpec& g = s.grid();
  detail::put_u32(out, static_cast<std::uint32_t>(g.dim));
  detail::put_u32(out, static_cast<std::uint32_t>(g.points_per_dim));
  detail::put_f64(out, g.half_width);
  detail::put_u32(out, static_cast<std::uint32_t>(s.size()));
  detail::put_f64(out, s.time);
  for (double t : s.theta.values) detail::put_f64(out, t);
  for (const WaveField& f : s.fields)
    for (const Complex& v : f.values) {
      detail::put_f64(out, v.real());
      detail::put_f64(out, v.imag());
    }
  return out;
}

inline EnsembleState restore_state(const std::string& bytes) {
  if (bytes.size() < 5 || bytes.compare(0, 5, "QSYN1") != 0)
    throw ParseError("checkpoint: bad magic (expected QSYN1)");
  detail::ByteReader r{bytes, 5};
  std::uint32_t dim = r.u32();
  std::uint32_t n = r.u32();
  double half_width = r.f64();
  std::uint32_t count = r.u32();
  double time = r.f64();
  if (count == 0) throw ParseError("checkpoint: empty ensemble");
  GridSpec grid = GridSpec::create(static_cast<int>(dim), static_cast<int>(n), half_width);
  EnsembleState s;
  s.time = time;
  s.theta.values.resize(count);
  for (std::uint32_t j = 0; j < count; ++j) s.theta.values[j] = r.f64();
  for (std::uint32_t j = 0; j < count; ++j) {
    WaveField f = WaveField::zero(grid);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      double re = r.f64();
      double im = r.f64();
      f.values[i] = Complex(re, im);
    }
    s.fields.push_back(std::move(f));
  }
  if (r.pos != bytes.size())
    throw ParseError("checkpoint: trailing bytes after the ensemble payload");
  return s;
}

inline void write_checkpoint(const std::string& path, const EnsembleState& s) {
  atomic_write_file(path, checkpoint_bytes(s));
}

inline EnsembleState read_checkpoint(const std::string& path) {
  return restore_state(read_file(path));
}

}  // namespace qsync

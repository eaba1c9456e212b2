// anitv: restoration and segmentation driver.
//
//   anitv degrade   blur + noise a clean image (or a named generator) and
//                   write the observation plus a manifest capturing every
//                   parameter and seed
//   anitv restore   run the support-shrinking solver on an observation and
//                   write the restored image, trace CSV, verification report,
//                   and lower-bound histogram
//   anitv segment   restore, then quantize into K phases; optional per-phase
//                   Jaccard table against a ground-truth image
//   anitv report    turn trace CSVs into plain plot data (objective vs k,
//                   support size vs k)
//
// Exit codes: 0 ok, 1 file/IO problem, 2 bad usage or parameters,
// 3 solver divergence, 4 a theory check failed.
//
// Config precedence everywhere: explicit flags > manifest > built-in defaults.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "anitv/anitv.hpp"

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kManifestVersion = 1;

constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitTheory = 4;

// --- specs bridged between flags and the manifest ---------------------------

struct KernelSpec {
  std::string name = "average";  // average | gaussian | disk | identity
  int size = 5;                  // average/gaussian edge length
  double sigma = 12.0;           // gaussian only
  double radius = 2.0;           // disk only
};

struct NoiseSpec {
  std::string type = "none";  // none | salt-pepper | gaussian
  double level = 0.3;         // salt-pepper fraction
  double variance = 1e-6;     // gaussian variance
};

struct SourceSpec {
  std::string input;                 // path to a clean image, or
  std::string generator;             // a named test image
  int width = 64, height = 64;
};

struct ModelSpec {
  double beta = 20.0;
  double q = 1.0;
  std::string potential = "power";
  double p = 0.5;
};

anitv::Kernel build_kernel(const KernelSpec& k) {
  if (k.name == "average") return anitv::make_average_kernel(k.size);
  if (k.name == "gaussian") return anitv::make_gaussian_kernel(k.size, k.size, k.sigma);
  if (k.name == "disk") return anitv::make_disk_kernel(k.radius);
  if (k.name == "identity") return anitv::make_identity_kernel();
  throw anitv::parameter_error("unknown kernel '" + k.name +
                               "' (use average, gaussian, disk, or identity)");
}

json kernel_to_json(const KernelSpec& k) {
  json j{{"name", k.name}};
  if (k.name == "average") j["size"] = k.size;
  if (k.name == "gaussian") {
    j["size"] = k.size;
    j["sigma"] = k.sigma;
  }
  if (k.name == "disk") j["radius"] = k.radius;
  return j;
}

json noise_to_json(const NoiseSpec& n) {
  json j{{"type", n.type}};
  if (n.type == "salt-pepper") j["level"] = n.level;
  if (n.type == "gaussian") j["variance"] = n.variance;
  return j;
}

// --- manifest ----------------------------------------------------------------

json load_manifest(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw anitv::io_error("cannot open manifest '" + path + "'");
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw anitv::io_error("malformed manifest '" + path + "': " + e.what());
  }
  return j;
}

void write_manifest(const std::string& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw anitv::io_error("cannot open '" + path + "' for writing");
  os << j.dump(2) << "\n";
  if (!os) throw anitv::io_error("write failed for '" + path + "'");
}

// b.png -> b.manifest.json
std::string manifest_path_for(const std::string& output) {
  auto dot = output.find_last_of('.');
  auto slash = output.find_last_of('/');
  std::string stem = (dot == std::string::npos || (slash != std::string::npos && dot < slash))
                         ? output
                         : output.substr(0, dot);
  return stem + ".manifest.json";
}

void apply_manifest(const json& j, SourceSpec& src, KernelSpec& kern, NoiseSpec& noise,
                    ModelSpec& model, anitv::SolverConfig& cfg, std::uint64_t& seed,
                    int& bit_depth) {
  if (j.contains("source")) {
    const json& s = j["source"];
    src.input = s.value("input", src.input);
    src.generator = s.value("generator", src.generator);
    src.width = s.value("width", src.width);
    src.height = s.value("height", src.height);
  }
  if (j.contains("kernel")) {
    const json& k = j["kernel"];
    kern.name = k.value("name", kern.name);
    kern.size = k.value("size", kern.size);
    kern.sigma = k.value("sigma", kern.sigma);
    kern.radius = k.value("radius", kern.radius);
  }
  if (j.contains("noise")) {
    const json& n = j["noise"];
    noise.type = n.value("type", noise.type);
    noise.level = n.value("level", noise.level);
    noise.variance = n.value("variance", noise.variance);
  }
  if (j.contains("model")) {
    const json& m = j["model"];
    model.beta = m.value("beta", model.beta);
    model.q = m.value("q", model.q);
    model.potential = m.value("potential", model.potential);
    model.p = m.value("p", model.p);
  }
  if (j.contains("config")) {
    const json& c = j["config"];
    cfg.rho = c.value("rho", cfg.rho);
    cfg.tau = c.value("tau", cfg.tau);
    cfg.eps_outer = c.value("eps_outer", cfg.eps_outer);
    cfg.max_outer = c.value("max_outer", cfg.max_outer);
    cfg.r_v = c.value("r_v", cfg.r_v);
    cfg.r_w = c.value("r_w", cfg.r_w);
    cfg.eps_inner = c.value("eps_inner", cfg.eps_inner);
    cfg.max_inner = c.value("max_inner", cfg.max_inner);
    cfg.init_r_v = c.value("init_r_v", cfg.init_r_v);
    cfg.inexactness = c.value("inexactness", cfg.inexactness);
  }
  seed = j.value("seed", seed);
  if (j.contains("output")) bit_depth = j["output"].value("bit_depth", bit_depth);
}

json manifest_to_json(const SourceSpec& src, const KernelSpec& kern, const NoiseSpec& noise,
                      const ModelSpec& model, const anitv::SolverConfig& cfg, std::uint64_t seed,
                      int bit_depth) {
  json j;
  j["versions"] = {{"anitv", kVersion}, {"manifest", kManifestVersion}};
  json s;
  if (!src.input.empty()) {
    s["input"] = src.input;
  } else {
    s["generator"] = src.generator;
    s["width"] = src.width;
    s["height"] = src.height;
  }
  j["source"] = s;
  j["kernel"] = kernel_to_json(kern);
  j["noise"] = noise_to_json(noise);
  j["seed"] = seed;
  j["output"] = {{"bit_depth", bit_depth}};
  j["model"] = {{"beta", model.beta},
                {"q", model.q},
                {"potential", model.potential},
                {"p", model.p}};
  j["config"] = {{"rho", cfg.rho},
                 {"tau", cfg.tau},
                 {"eps_outer", cfg.eps_outer},
                 {"max_outer", cfg.max_outer},
                 {"r_v", cfg.r_v},
                 {"r_w", cfg.r_w},
                 {"eps_inner", cfg.eps_inner},
                 {"max_inner", cfg.max_inner},
                 {"init_r_v", cfg.init_r_v},
                 {"inexactness", cfg.inexactness}};
  return j;
}

// --- flag registration -------------------------------------------------------

// Holds the CLI pointers so values set on the command line can override the
// manifest after it is loaded (flags > manifest > defaults).
struct CommonOptions {
  KernelSpec kernel;
  NoiseSpec noise;
  ModelSpec model;
  anitv::SolverConfig cfg;
  std::uint64_t seed = 7;
  int bit_depth = 16;
  std::string manifest;

  std::vector<std::pair<CLI::Option*, std::function<void()>>> overrides;

  // Registers one flag and remembers how to re-apply it after the manifest.
  template <typename T>
  CLI::Option* bind(CLI::App* app, const std::string& flag, T& target,
                    const std::string& help) {
    auto staged = std::make_shared<T>();
    CLI::Option* opt = app->add_option(flag, *staged, help);
    overrides.emplace_back(opt, [&target, staged]() { target = *staged; });
    return opt;
  }

  void add_kernel_flags(CLI::App* app) {
    bind(app, "--kernel", kernel.name, "blur kernel: average, gaussian, disk, identity")
        ->check(CLI::IsMember({"average", "gaussian", "disk", "identity"}));
    bind(app, "--kernel-size", kernel.size, "kernel edge length (average, gaussian)");
    bind(app, "--kernel-sigma", kernel.sigma, "gaussian kernel standard deviation");
    bind(app, "--kernel-radius", kernel.radius, "disk kernel radius");
  }

  void add_model_flags(CLI::App* app) {
    bind(app, "--beta", model.beta, "fidelity weight");
    bind(app, "--q", model.q, "fidelity exponent, q >= 1");
    bind(app, "--potential", model.potential, "regularizer potential: power or logpower")
        ->check(CLI::IsMember({"power", "logpower"}));
    bind(app, "--p", model.p, "potential exponent, 0 < p < 1");
  }

  void add_config_flags(CLI::App* app) {
    bind(app, "--rho", cfg.rho, "proximal weight");
    bind(app, "--tau", cfg.tau, "support threshold");
    bind(app, "--eps-outer", cfg.eps_outer, "outer stop tolerance");
    bind(app, "--max-outer", cfg.max_outer, "outer iteration cap");
    bind(app, "--r-v", cfg.r_v, "inner fidelity penalty");
    bind(app, "--r-w", cfg.r_w, "inner difference penalty");
    bind(app, "--eps-inner", cfg.eps_inner, "inner stop tolerance");
    bind(app, "--max-inner", cfg.max_inner, "inner iteration cap");
    bind(app, "--init-r-v", cfg.init_r_v, "initializer fidelity penalty");
    bind(app, "--inexactness", cfg.inexactness, "decrease-bound slack in (0,1)");
  }

  void add_noise_flags(CLI::App* app) {
    bind(app, "--noise", noise.type, "noise model: none, salt-pepper, gaussian")
        ->check(CLI::IsMember({"none", "salt-pepper", "gaussian"}));
    bind(app, "--level", noise.level, "salt-pepper corruption fraction in [0,1]");
    bind(app, "--variance", noise.variance, "gaussian noise variance");
    bind(app, "--seed", seed, "noise seed");
  }

  void add_io_flags(CLI::App* app) {
    bind(app, "--bit-depth", bit_depth, "PNG/PGM sample depth, 8 or 16");
    app->add_option("--manifest", manifest, "manifest to take parameters from");
  }

  // defaults -> manifest -> flags.
  void resolve(SourceSpec& src) {
    if (!manifest.empty())
      apply_manifest(load_manifest(manifest), src, kernel, noise, model, cfg, seed, bit_depth);
    for (auto& [opt, apply] : overrides)
      if (opt->count() > 0) apply();
  }
};

anitv::RestorationModel build_model(const ModelSpec& spec, const KernelSpec& kern,
                                    anitv::Image b) {
  anitv::RestorationModel m{
      anitv::GridOperator(build_kernel(kern), b.width, b.height), std::move(b),
      spec.beta, spec.q, anitv::make_potential(spec.potential, spec.p)};
  m.validate();
  return m;
}

std::string fmt(double v) { return anitv::detail::format_double(v); }

// --- degrade -----------------------------------------------------------------

struct DegradeArgs {
  CommonOptions common;
  SourceSpec source;
  std::string output;
  std::string save_clean;
  CLI::Option *input_opt = nullptr, *gen_opt = nullptr;
};

int run_degrade(DegradeArgs& a) {
  a.common.resolve(a.source);
  // A flag naming one source silences a manifest naming the other.
  if (a.input_opt->count() > 0) a.source.generator.clear();
  if (a.gen_opt->count() > 0) a.source.input.clear();
  if (a.source.input.empty() == a.source.generator.empty())
    throw anitv::parameter_error("degrade needs exactly one of --input and --generate");

  anitv::Image clean =
      a.source.input.empty()
          ? anitv::make_test_image(anitv::test_image_kind_from_name(a.source.generator),
                                   a.source.width, a.source.height)
          : anitv::read_image(a.source.input);
  if (!a.source.input.empty()) {
    a.source.width = clean.width;
    a.source.height = clean.height;
  }

  anitv::GridOperator A(build_kernel(a.common.kernel), clean.width, clean.height);
  anitv::Image b = A.apply(clean);
  if (a.common.noise.type == "salt-pepper")
    b = anitv::add_salt_pepper(b, a.common.noise.level, a.common.seed);
  else if (a.common.noise.type == "gaussian")
    b = anitv::add_gaussian_noise(b, a.common.noise.variance, a.common.seed);
  else if (a.common.noise.type != "none")
    throw anitv::parameter_error("unknown noise type '" + a.common.noise.type + "'");

  anitv::write_image(a.output, b, a.common.bit_depth);
  std::cout << "wrote " << a.output << "\n";
  if (!a.save_clean.empty()) {
    anitv::write_image(a.save_clean, clean, a.common.bit_depth);
    std::cout << "wrote " << a.save_clean << "\n";
  }
  std::string mpath = manifest_path_for(a.output);
  write_manifest(mpath, manifest_to_json(a.source, a.common.kernel, a.common.noise,
                                         a.common.model, a.common.cfg, a.common.seed,
                                         a.common.bit_depth));
  std::cout << "wrote " << mpath << "\n";
  return 0;
}

// --- restore -----------------------------------------------------------------

struct RestoreArgs {
  CommonOptions common;
  std::string input;
  std::string prefix;
  std::string ground_truth;
  bool timing = false;
};

void write_trace_file(const std::string& path, const anitv::IterationTrace& trace, bool timing) {
  std::ofstream os(path);
  if (!os) throw anitv::io_error("cannot open '" + path + "' for writing");
  anitv::write_trace_csv(trace, os, timing);
  if (!os) throw anitv::io_error("write failed for '" + path + "'");
}

// Writes the human-readable verification report; returns false if any theory
// check failed.
bool write_report(const std::string& path, const anitv::RestorationModel& m,
                  const anitv::SolverConfig& cfg, const anitv::RunResult& r,
                  const anitv::LowerBoundReport& lb, const std::string& truth_path,
                  const anitv::Image* truth, bool timing) {
  const anitv::IterationTrace& t = r.trace;
  anitv::DecreaseReport dec = anitv::verify_decrease(t, cfg);
  anitv::NestingReport nest = anitv::verify_support_nesting(t);

  std::ofstream os(path);
  if (!os) throw anitv::io_error("cannot open '" + path + "' for writing");
  os << "restoration report\n";
  os << "model: q=" << fmt(m.q) << " beta=" << fmt(m.beta)
     << " potential=" << anitv::potential_kind_name(m.potential.kind)
     << " p=" << fmt(m.potential.p) << "\n";
  os << "image: " << m.b.width << "x" << m.b.height << ", coefficients=" << t.coeff_total
     << "\n";
  os << "config: rho=" << fmt(cfg.rho) << " tau=" << fmt(cfg.tau)
     << " eps_outer=" << fmt(cfg.eps_outer) << " max_outer=" << cfg.max_outer
     << " r_v=" << fmt(cfg.r_v) << " r_w=" << fmt(cfg.r_w) << " eps_inner=" << fmt(cfg.eps_inner)
     << " max_inner=" << cfg.max_inner << "\n";
  if (t.init.ran) {
    os << "initializer: F=" << fmt(t.init.F_value) << " iterations=" << t.init.stats.iterations;
    if (timing) os << " ms=" << fmt(t.init.ms);
    os << "\n";
  }
  os << "outer iterations: " << (t.rows.empty() ? 0 : t.rows.back().k)
     << (t.converged ? " (converged)" : " (iteration cap)")
     << (t.degenerate_constant ? " (degenerate constant observation)" : "") << "\n";
  if (!t.rows.empty()) {
    const anitv::TraceRow& last = t.rows.back();
    os << "objective: F=" << fmt(last.F) << " (reg=" << fmt(last.F_reg)
       << ", fid=" << fmt(last.F_fid) << ")\n";
    os << "support: |S| " << t.rows.front().S_size << " -> " << last.S_size << ", |T| "
       << t.rows.front().T_size << " -> " << last.T_size << "\n";
  }
  if (truth) {
    os << "psnr vs " << truth_path << ": restored=" << fmt(anitv::psnr(r.x, *truth));
    if (t.init.ran) os << " initializer=" << fmt(anitv::psnr(t.x0, *truth));
    os << "\n";
  }
  os << "\n";

  os << "sufficient decrease: " << (dec.pass ? "PASS" : "FAIL")
     << " (min drop=" << fmt(dec.min_drop) << ", slack=" << fmt(dec.slack) << ")\n";
  for (const anitv::DecreaseViolation& v : dec.violations)
    os << "  violation at k=" << v.k << ": F " << fmt(v.F_prev) << " -> " << fmt(v.F_next)
       << ", required drop " << fmt(v.required_drop) << ", actual " << fmt(v.actual_drop)
       << "\n";

  os << "support nesting: " << (nest.pass ? "PASS" : "FAIL");
  if (nest.stabilization_K >= 0) os << " (stabilized at k=" << nest.stabilization_K << ")";
  os << "\n";
  for (const std::string& v : nest.violations) os << "  " << v << "\n";

  os << "lower bound: " << (lb.pass ? "PASS" : "FAIL") << " (nonzeros=" << lb.nonzero_count
     << ", theta_hat=" << fmt(lb.theta_hat) << ", max=" << fmt(lb.max_mag)
     << ", tau=" << fmt(lb.tau) << ", gap=" << fmt(lb.gap_ratio) << ")\n";
  if (!os) throw anitv::io_error("write failed for '" + path + "'");
  return dec.pass && nest.pass && lb.pass;
}

void write_lowerbound_csv(const std::string& path, const anitv::LowerBoundReport& lb) {
  std::ofstream os(path);
  if (!os) throw anitv::io_error("cannot open '" + path + "' for writing");
  os << "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < lb.counts.size(); ++i)
    os << fmt(lb.bin_edges[i]) << ',' << fmt(lb.bin_edges[i + 1]) << ',' << lb.counts[i]
       << '\n';
  if (!os) throw anitv::io_error("write failed for '" + path + "'");
}

int run_restore(RestoreArgs& a) {
  SourceSpec ignored;
  a.common.resolve(ignored);
  anitv::Image b = anitv::read_image(a.input);
  anitv::RestorationModel m = build_model(a.common.model, a.common.kernel, std::move(b));

  anitv::RunResult r;
  try {
    r = anitv::run(m, a.common.cfg);
  } catch (const anitv::solver_divergence_error& e) {
    // Leave the partial trace behind for inspection, then report divergence.
    if (e.partial_trace)
      write_trace_file(a.prefix + ".trace.csv", *e.partial_trace, a.timing);
    throw;
  }

  anitv::Image truth;
  bool have_truth = !a.ground_truth.empty();
  if (have_truth) truth = anitv::read_image(a.ground_truth);

  anitv::LowerBoundReport lb = anitv::lower_bound_report(r.x, a.common.cfg.tau);
  anitv::write_image(a.prefix + ".restored.png", r.x, a.common.bit_depth);
  anitv::write_image(a.prefix + ".x0.png", r.trace.x0, a.common.bit_depth);
  write_trace_file(a.prefix + ".trace.csv", r.trace, a.timing);
  write_lowerbound_csv(a.prefix + ".lowerbound.csv", lb);
  bool ok = write_report(a.prefix + ".report.txt", m, a.common.cfg, r, lb, a.ground_truth,
                         have_truth ? &truth : nullptr, a.timing);
  std::cout << "wrote " << a.prefix << ".{restored.png,x0.png,trace.csv,lowerbound.csv,report.txt}"
            << "\n";
  if (!ok) {
    std::cerr << "theory verification failed; see " << a.prefix << ".report.txt\n";
    return kExitTheory;
  }
  return 0;
}

// --- segment -----------------------------------------------------------------

struct SegmentArgs {
  CommonOptions common;
  std::string input;
  std::string prefix;
  std::string ground_truth;
  int phases = 2;
  bool timing = false;
};

int run_segment(SegmentArgs& a) {
  SourceSpec ignored;
  a.common.resolve(ignored);
  anitv::Image b = anitv::read_image(a.input);
  anitv::RestorationModel m = build_model(a.common.model, a.common.kernel, std::move(b));
  anitv::SegmentationResult seg;
  try {
    seg = anitv::two_stage_segment(m, a.common.cfg, a.phases);
  } catch (const anitv::solver_divergence_error& e) {
    if (e.partial_trace)
      write_trace_file(a.prefix + ".trace.csv", *e.partial_trace, a.timing);
    throw;
  }

  const int K = seg.labels.K;
  anitv::Image label_img(seg.labels.width, seg.labels.height);
  anitv::Image painted(seg.labels.width, seg.labels.height);
  for (std::size_t i = 0; i < seg.labels.labels.size(); ++i) {
    int lab = seg.labels.labels[i];
    label_img.data[i] = K > 1 ? static_cast<double>(lab - 1) / (K - 1) : 0.0;
    painted.data[i] = seg.centers[lab - 1];
  }
  anitv::write_image(a.prefix + ".labels.png", label_img, a.common.bit_depth);
  anitv::write_image(a.prefix + ".segmented.png", painted, a.common.bit_depth);
  anitv::write_image(a.prefix + ".restored.png", seg.restored, a.common.bit_depth);
  write_trace_file(a.prefix + ".trace.csv", seg.trace, a.timing);
  std::cout << "wrote " << a.prefix << ".{labels.png,segmented.png,restored.png,trace.csv}\n";

  if (!a.ground_truth.empty()) {
    anitv::Image truth = anitv::read_image(a.ground_truth);
    anitv::QuantizeResult gt = anitv::quantize_labels(truth, K);
    std::ofstream os(a.prefix + ".js.csv");
    if (!os) throw anitv::io_error("cannot open '" + a.prefix + ".js.csv' for writing");
    os << "phase,center,js\n";
    for (int phase = 1; phase <= K; ++phase)
      os << phase << ',' << fmt(seg.centers[phase - 1]) << ','
         << fmt(anitv::jaccard(seg.labels, gt.labels, phase)) << '\n';
    if (!os) throw anitv::io_error("write failed for '" + a.prefix + ".js.csv'");
    std::cout << "wrote " << a.prefix << ".js.csv\n";
  }
  return 0;
}

// --- report ------------------------------------------------------------------

struct ParsedTrace {
  std::string name;
  std::vector<double> F;
  std::vector<long> T_size;
};

ParsedTrace parse_trace_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw anitv::io_error("cannot open trace '" + path + "'");
  std::string line;
  if (!std::getline(is, line) || line != "k,F,F_reg,F_fid,S_size,T_size,step_norm,inner_iters,ms")
    throw anitv::io_error("'" + path + "' is not a trace CSV (bad header)");
  ParsedTrace t;
  auto slash = path.find_last_of('/');
  t.name = slash == std::string::npos ? path : path.substr(slash + 1);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      auto comma = line.find(',', pos);
      fields.push_back(line.substr(pos, comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (fields.size() != 9) throw anitv::io_error("'" + path + "' has a malformed trace row");
    try {
      t.F.push_back(std::stod(fields[1]));
      t.T_size.push_back(std::stol(fields[5]));
    } catch (const std::exception&) {
      throw anitv::io_error("'" + path + "' has a malformed trace row");
    }
  }
  if (t.F.empty()) throw anitv::io_error("'" + path + "' contains no iterations");
  return t;
}

int run_report(const std::vector<std::string>& paths, const std::string& prefix,
               long coeff_total) {
  std::vector<ParsedTrace> traces;
  std::size_t rows = 0;
  for (const std::string& p : paths) {
    traces.push_back(parse_trace_csv(p));
    rows = std::max(rows, traces.back().F.size());
  }

  // One row per outer iteration; exhausted traces print nan so plotting
  // tools skip them.
  std::ofstream obj(prefix + ".objective.dat");
  if (!obj) throw anitv::io_error("cannot open '" + prefix + ".objective.dat' for writing");
  obj << "# k";
  for (const ParsedTrace& t : traces) obj << " F[" << t.name << "]";
  obj << "\n";
  for (std::size_t k = 0; k < rows; ++k) {
    obj << k;
    for (const ParsedTrace& t : traces)
      obj << ' ' << (k < t.F.size() ? fmt(t.F[k]) : "nan");
    obj << '\n';
  }

  std::ofstream sup(prefix + ".support.dat");
  if (!sup) throw anitv::io_error("cannot open '" + prefix + ".support.dat' for writing");
  sup << "# k";
  for (const ParsedTrace& t : traces)
    sup << ' ' << (coeff_total > 0 ? "T_frac[" : "T_size[") << t.name << "]";
  sup << "\n";
  for (std::size_t k = 0; k < rows; ++k) {
    sup << k;
    for (const ParsedTrace& t : traces) {
      sup << ' ';
      if (k >= t.T_size.size())
        sup << "nan";
      else if (coeff_total > 0)
        sup << fmt(static_cast<double>(t.T_size[k]) / static_cast<double>(coeff_total));
      else
        sup << t.T_size[k];
    }
    sup << '\n';
  }
  if (!obj || !sup) throw anitv::io_error("write failed under prefix '" + prefix + "'");
  std::cout << "wrote " << prefix << ".objective.dat and " << prefix << ".support.dat\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anisotropic non-Lipschitz restoration and segmentation"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  DegradeArgs deg;
  CLI::App* deg_cmd = app.add_subcommand("degrade", "blur and corrupt a clean image");
  deg.input_opt = deg_cmd->add_option("--input", deg.source.input, "clean input image");
  deg.gen_opt = deg_cmd->add_option("--generate", deg.source.generator,
                                    "test image: squares, twocircles, geometry, phantom");
  deg_cmd->add_option("--width", deg.source.width, "generated image width");
  deg_cmd->add_option("--height", deg.source.height, "generated image height");
  deg_cmd->add_option("--output", deg.output, "observation output path")->required();
  deg_cmd->add_option("--save-clean", deg.save_clean, "also write the clean image here");
  deg.common.add_kernel_flags(deg_cmd);
  deg.common.add_noise_flags(deg_cmd);
  deg.common.add_model_flags(deg_cmd);
  deg.common.add_config_flags(deg_cmd);
  deg.common.add_io_flags(deg_cmd);

  RestoreArgs res;
  CLI::App* res_cmd = app.add_subcommand("restore", "run the support-shrinking solver");
  res_cmd->add_option("--input", res.input, "observation image")->required();
  res_cmd->add_option("--output-prefix", res.prefix, "prefix for output files")->required();
  res_cmd->add_option("--ground-truth", res.ground_truth, "clean image for PSNR reporting");
  res_cmd->add_flag("--timing", res.timing, "record wall times in the trace CSV");
  res.common.add_kernel_flags(res_cmd);
  res.common.add_model_flags(res_cmd);
  res.common.add_config_flags(res_cmd);
  res.common.add_io_flags(res_cmd);

  SegmentArgs seg;
  CLI::App* seg_cmd = app.add_subcommand("segment", "restore and quantize into K phases");
  seg_cmd->add_option("--input", seg.input, "observation image")->required();
  seg_cmd->add_option("--phases", seg.phases, "number of phases K")->required();
  seg_cmd->add_option("--output-prefix", seg.prefix, "prefix for output files")->required();
  seg_cmd->add_option("--ground-truth", seg.ground_truth,
                      "clean image for the per-phase Jaccard table");
  seg_cmd->add_flag("--timing", seg.timing, "record wall times in the trace CSV");
  seg.common.add_kernel_flags(seg_cmd);
  seg.common.add_model_flags(seg_cmd);
  seg.common.add_config_flags(seg_cmd);
  seg.common.add_io_flags(seg_cmd);

  std::vector<std::string> report_paths;
  std::string report_prefix;
  long report_coeff_total = 0;
  CLI::App* rep_cmd = app.add_subcommand("report", "turn trace CSVs into plot data");
  rep_cmd->add_option("traces", report_paths, "trace CSV files")->required();
  rep_cmd->add_option("--output-prefix", report_prefix, "prefix for .dat files")->required();
  rep_cmd->add_option("--coeff-total", report_coeff_total,
                      "total difference-coefficient count |J|; emit |T|/|J| fractions");

  try {
    app.parse(argc, argv);
    if (deg_cmd->parsed()) return run_degrade(deg);
    if (res_cmd->parsed()) return run_restore(res);
    if (seg_cmd->parsed()) return run_segment(seg);
    if (rep_cmd->parsed()) return run_report(report_paths, report_prefix, report_coeff_total);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const anitv::theory_violation_error& e) {
    std::cerr << "theory violation: " << e.what() << "\n";
    return kExitTheory;
  } catch (const anitv::divergence_error& e) {
    std::cerr << "solver divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const anitv::io_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const anitv::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

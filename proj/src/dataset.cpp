#include "gphs/dataset.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gphs/errors.hpp"
#include "gphs/gauss.hpp"

namespace gphs {

namespace {

RandomStream substream(std::uint64_t seed, RngDomain domain, std::uint64_t sub) {
  return RandomStream(seed, (static_cast<std::uint64_t>(domain) << 8) | sub);
}

// band half-width s with P(|g + t| <= s) = p for g ~ N(0,1)
double slab_half_width(double t, double p) {
  double lo = 0.0, hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double mass = normal_cdf(mid - t) - normal_cdf(-mid - t);
    (mass < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

const Halfspace& slab_concept(const PlantedModel& model) {
  if (!std::holds_alternative<Halfspace>(model.target))
    throw InputError("slab noise requires a halfspace concept");
  const auto& h = std::get<Halfspace>(model.target);
  if (h.is_constant()) throw InputError("slab noise requires a non-constant halfspace concept");
  return h;
}

void check_noise(const PlantedModel& model) {
  if (model.noise == NoiseKind::none) return;
  if (!(model.noise_p >= 0.0 && model.noise_p < 0.5))
    throw InputError("noise rate must lie in [0, 1/2)");
  if (model.noise == NoiseKind::slab) slab_concept(model);
}

}  // namespace

double planted_opt(const PlantedModel& model) {
  check_noise(model);
  return model.noise == NoiseKind::none ? 0.0 : model.noise_p;
}

LabeledDataset sample_dataset(const PlantedModel& model, int d, long long n, std::uint64_t seed,
                              RngDomain domain) {
  if (d < 1) throw InputError("dimension must be >= 1");
  if (n < 1) throw InputError("sample size must be >= 1");
  if (hypothesis_dim(model.target) != d) throw InputError("planted concept dimension mismatch");
  check_noise(model);
  LabeledDataset ds;
  ds.x.resize(n, d);
  ds.y.resize(n);
  RandomStream points = substream(seed, domain, 0);
  RandomStream flips = substream(seed, domain, 1);
  double width = 0.0;
  const Halfspace* slab = nullptr;
  if (model.noise == NoiseKind::slab) {
    slab = &slab_concept(model);
    width = slab_half_width(slab->t, model.noise_p);
  }
  Eigen::VectorXd xi(d);
  for (long long i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) xi[j] = points.normal(static_cast<std::uint64_t>(i) * d + j);
    ds.x.row(i) = xi;
    int lab = hypothesis_eval(model.target, xi);
    if (model.noise == NoiseKind::rcn) {
      if (flips.uniform(static_cast<std::uint64_t>(i)) < model.noise_p) lab = -lab;
    } else if (model.noise == NoiseKind::slab) {
      if (std::abs(slab->w.dot(xi) + slab->t) <= width) lab = -lab;
    }
    ds.y[i] = static_cast<std::int8_t>(lab);
  }
  return ds;
}

void write_dataset_text(const LabeledDataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open for writing: " + path);
  out << ds.dim() << ' ' << ds.size() << '\n';
  char buf[32];
  for (long long i = 0; i < ds.size(); ++i) {
    for (int j = 0; j < ds.dim(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", ds.x(i, j));
      out << buf << ' ';
    }
    out << (ds.y[i] > 0 ? "1" : "-1") << '\n';
  }
  if (!out) throw InputError("write failed: " + path);
}

LabeledDataset read_dataset_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty file");
  int d = 0;
  long long n = -1;
  {
    std::istringstream head(line);
    std::string rest;
    if (!(head >> d >> n) || (head >> rest)) throw InputError(path + " line 1: bad header '" + line + "'");
  }
  if (d < 1 || n < 0) throw InputError(path + " line 1: bad dimensions");
  LabeledDataset ds;
  ds.x.resize(n, d);
  ds.y.resize(n);
  for (long long i = 0; i < n; ++i) {
    if (!std::getline(in, line))
      throw InputError(path + ": expected " + std::to_string(n) + " rows, got " + std::to_string(i));
    std::istringstream row(line);
    for (int j = 0; j < d; ++j)
      if (!(row >> ds.x(i, j)))
        throw InputError(path + " line " + std::to_string(i + 2) + ": bad coordinate " +
                         std::to_string(j + 1));
    int lab;
    std::string rest;
    if (!(row >> lab) || (lab != 1 && lab != -1) || (row >> rest))
      throw InputError(path + " line " + std::to_string(i + 2) + ": bad label");
    ds.y[i] = static_cast<std::int8_t>(lab);
  }
  std::string rest;
  if (in >> rest) throw InputError(path + ": trailing content after last row");
  return ds;
}

namespace {
constexpr char kMagic[4] = {'G', 'P', 'H', 'S'};
}

void write_dataset_binary(const LabeledDataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open for writing: " + path);
  out.write(kMagic, 4);
  std::uint32_t d = static_cast<std::uint32_t>(ds.dim());
  std::uint64_t n = static_cast<std::uint64_t>(ds.size());
  out.write(reinterpret_cast<const char*>(&d), 4);
  out.write(reinterpret_cast<const char*>(&n), 8);
  std::vector<double> row(ds.dim());
  for (long long i = 0; i < ds.size(); ++i) {
    for (int j = 0; j < ds.dim(); ++j) row[j] = ds.x(i, j);
    out.write(reinterpret_cast<const char*>(row.data()), 8 * static_cast<std::streamsize>(row.size()));
  }
  for (long long i = 0; i < ds.size(); ++i) {
    char b = ds.y[i] > 0 ? char(0x01) : char(0xFF);
    out.write(&b, 1);
  }
  if (!out) throw InputError("write failed: " + path);
}

LabeledDataset read_dataset_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open: " + path);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw InputError(path + ": missing GPHS magic");
  std::uint32_t d = 0;
  std::uint64_t n = 0;
  if (!in.read(reinterpret_cast<char*>(&d), 4) || !in.read(reinterpret_cast<char*>(&n), 8))
    throw InputError(path + ": truncated header");
  if (d < 1 || n > (1ull << 40)) throw InputError(path + ": implausible header");
  LabeledDataset ds;
  ds.x.resize(static_cast<Eigen::Index>(n), d);
  ds.y.resize(n);
  std::vector<double> row(d);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (!in.read(reinterpret_cast<char*>(row.data()), 8 * static_cast<std::streamsize>(d)))
      throw InputError(path + ": truncated at point " + std::to_string(i));
    for (std::uint32_t j = 0; j < d; ++j) ds.x(static_cast<Eigen::Index>(i), j) = row[j];
  }
  for (std::uint64_t i = 0; i < n; ++i) {
    char b;
    if (!in.read(&b, 1)) throw InputError(path + ": truncated at label " + std::to_string(i));
    if (b == char(0x01))
      ds.y[i] = 1;
    else if (b == char(0xFF))
      ds.y[i] = -1;
    else
      throw InputError(path + ": bad label byte at " + std::to_string(i));
  }
  char extra;
  if (in.read(&extra, 1)) throw InputError(path + ": trailing bytes after labels");
  return ds;
}

LabeledDataset read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open: " + path);
  char magic[4] = {0, 0, 0, 0};
  in.read(magic, 4);
  in.close();
  return std::memcmp(magic, kMagic, 4) == 0 ? read_dataset_binary(path) : read_dataset_text(path);
}

}  // namespace gphs

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "gphs/hypothesis.hpp"
#include "gphs/rng.hpp"

namespace gphs {

/// Gaussian points with +/-1 labels; x is n rows by d columns.
struct LabeledDataset {
  Eigen::MatrixXd x;
  std::vector<std::int8_t> y;

  int dim() const { return static_cast<int>(x.cols()); }
  long long size() const { return static_cast<long long>(x.rows()); }
};

enum class NoiseKind { none, rcn, slab };

/// Ground-truth concept plus label noise. rcn flips each label independently
/// with probability p; slab flips exactly the labels inside a band around a
/// halfspace boundary whose Gaussian mass is p (halfspace concepts only).
struct PlantedModel {
  Hypothesis target;
  NoiseKind noise = NoiseKind::none;
  double noise_p = 0.0;
};

/// Population error of the planted concept against its own noisy labels.
double planted_opt(const PlantedModel& model);

/// n standard Gaussian points in dimension d, labeled by the planted model.
/// Point i coordinate j is normal number i*d+j of (seed, domain); flips use an
/// independent substream, so datasets from distinct domains are independent.
LabeledDataset sample_dataset(const PlantedModel& model, int d, long long n, std::uint64_t seed,
                              RngDomain domain);

/// Text format: header "d n", then one row per point with d coordinates and
/// the label (+1/-1), space separated. Coordinates round-trip bit-exactly.
void write_dataset_text(const LabeledDataset& ds, const std::string& path);
LabeledDataset read_dataset_text(const std::string& path);

/// Binary format: magic "GPHS", u32 d, u64 n (little endian), n*d doubles
/// row-major little endian, then n label bytes 0x01 / 0xFF.
void write_dataset_binary(const LabeledDataset& ds, const std::string& path);
LabeledDataset read_dataset_binary(const std::string& path);

/// Reads either format, deciding by the 4-byte magic.
LabeledDataset read_dataset(const std::string& path);

}  // namespace gphs

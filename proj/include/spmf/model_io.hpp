#pragma once

#include <filesystem>

#include "spmf/factor_model.hpp"

namespace spmf {

inline constexpr int kModelFormatVersion = 1;

struct SavedModel {
  FactorModel model;
  Hyperparams hyperparams;
};

/// Single-line JSON header (version, shape, hyperparameters, id maps,
/// known-entity flags, FNV-1a checksum of the payload), a newline, then U
/// and V as row-major little-endian IEEE-754 doubles. Written atomically.
void save_model(const FactorModel& model, const Hyperparams& h, const std::filesystem::path& path);

/// Throws ModelFormatError on a newer version, a checksum mismatch, or a
/// truncated payload; nothing is returned in those cases.
SavedModel load_model(const std::filesystem::path& path);

}  // namespace spmf

#pragma once

#include "itd/classifiers/classifier.hpp"

#include <filesystem>
#include <istream>
#include <ostream>

namespace itd {

/// Versioned plain-text dump (`itd-model 1`); trees are written pre-order
/// and numbers in shortest round-trip form, so load(save(m)) predicts
/// identically to m.
void save_model(std::ostream &out, const TrainedModel &model);
void save_model(const std::filesystem::path &path, const TrainedModel &model);

/// Throws Unparseable on a malformed or unknown-version dump.
TrainedModel load_model(std::istream &in);
TrainedModel load_model(const std::filesystem::path &path);

} // namespace itd

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "softtouch/types.hpp"

namespace softtouch::io {

namespace fs = std::filesystem;

/// Column names of frames.csv, in file order.
const std::vector<std::string>& frames_csv_columns();

std::string meta_to_json(const ConditionMeta& meta);
ConditionMeta meta_from_json(const std::string& text);

/// Writes `<dir>/meta.json` and `<dir>/frames.csv`. Floats use 9 significant digits.
void write_episode(const fs::path& dir, const Episode& ep);
Episode read_episode(const fs::path& dir);

/// Frames-only CSV (labels/phase columns optional on read; missing ones are zero-filled).
struct FramesFile {
  std::vector<SensorFrame> frames;
  std::vector<ForceVector> labels;
  std::vector<PhaseMark> phases;
  bool has_labels = false;
};
FramesFile read_frames_csv(const fs::path& file, bool require_all_columns = true);
void write_frames_csv(const fs::path& file, const Episode& ep);

/// Episode directories are named episode_0000, episode_0001, ...
void write_dataset(const fs::path& root, const Dataset& episodes);
Dataset read_dataset(const fs::path& root);

struct ValidationReport {
  std::vector<std::string> errors;
  std::size_t episodes = 0;
  std::size_t frames = 0;
  std::size_t train_episodes = 0;
  std::size_t validation_episodes = 0;
  std::size_t holdout_episodes = 0;

  bool ok() const { return errors.empty(); }
  std::string summary() const;
};

/// Schema, timestamp uniformity, split flags and holdout presence. Never throws on bad data;
/// problems are itemized in the report.
ValidationReport validate_dataset(const fs::path& root);

}  // namespace softtouch::io

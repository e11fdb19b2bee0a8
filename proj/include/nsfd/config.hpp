#pragma once

#include <string>
#include <vector>

#include "nsfd/harness.hpp"
#include "nsfd/stepper.hpp"

namespace nsfd {

// Plain sectioned key-value configuration: '#' comments, [section] headers,
// `key = value` lines. Parsing is strict: unknown keys are rejected with the
// exact key path. docs/FORMATS.md documents the schema (version 1).
RunConfig parse_run_config(const std::string& text);
StudyPlan parse_study_config(const std::string& text);

// Canonical serialization: fixed section and key order, shortest round-trip
// numbers. parse(serialize(c)) reproduces serialize(c) byte for byte.
std::string serialize_run_config(const RunConfig& cfg);
std::string serialize_study_config(const StudyPlan& plan);

// `section.key=value` override strings applied before validation.
RunConfig parse_run_config(const std::string& text, const std::vector<std::string>& overrides);
StudyPlan parse_study_config(const std::string& text, const std::vector<std::string>& overrides);

VoxelMask read_mask_file(const std::string& path);

}  // namespace nsfd

// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Whole-file text helpers used by dataset and CLI artifact writers.

#pragma once

#include <string>

namespace ocsr {

/// Reads the whole file as bytes. Throws IoError if it cannot be opened.
std::string read_text_file(const std::string& path);

/// Writes (truncates) the whole file. Throws IoError on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace ocsr

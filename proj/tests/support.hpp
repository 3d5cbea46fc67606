#pragma once

#include <filesystem>
#include <string>

namespace testsupport {

/// Set by --regen-golden on the test command line.
extern bool regen_golden;

/// Compares `actual` with tests/golden/<name>, or rewrites the file when
/// regenerating. Returns false (with a message on stderr) on mismatch or a
/// missing fixture.
bool check_golden(const std::string& name, const std::string& actual);

std::filesystem::path golden_dir();

}  // namespace testsupport

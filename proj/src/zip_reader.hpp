#pragma once

#include <string>
#include <vector>

namespace resaug::ingest {

// Extracts one member from a zip archive held in memory. Supports the
// stored (0) and deflate (8) compression methods, which covers every
// archive this tool consumes.
std::string extract_zip_member(const std::string& archive, const std::string& member);

std::vector<std::string> list_zip_members(const std::string& archive);

}  // namespace resaug::ingest

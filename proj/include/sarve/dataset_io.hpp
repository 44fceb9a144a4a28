#pragma once

#include <filesystem>
#include <istream>
#include <string>

#include "sarve/domain.hpp"

namespace sarve {

// Line-oriented dataset text:
//
//   [meta]          schema_version <n> / t_total <minutes> / rooms <id>...
//   [persons]       <person> presenter|participant
//   [items]         <item>
//   [ratings]       <person> <item> <rating>
//   [contacts]      <presenter> <participant> <duration_min> <frequency>
//   [sessions]      <session> <presenter> <room> <start> <duration_min>
//   [availability]  <person> <room> <start> <end>
//   [relevance]     <participant> <session>
//
// Blank lines and lines starting with '#' are ignored. Tokens are separated
// by whitespace, so identifiers cannot contain spaces. Parsing checks syntax
// and cell uniqueness only; use validate_dataset for semantic invariants.
Dataset parse_dataset(std::istream& in);
Dataset parse_dataset(const std::string& text);
Dataset load_dataset(const std::filesystem::path& path);

// Canonical form: fixed section order, records sorted by key.
std::string serialize_dataset(const Dataset& dataset);
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);

}  // namespace sarve

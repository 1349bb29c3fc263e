#pragma once
// Command-line front end shared by the robin binary and the Python module.

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace robin::cli {

// Fixed key order, two-space indent, floats at 17 significant digits.
std::string write_json(const nlohmann::ordered_json& j);

// Exit codes: 0 ok, 1 acceptance failure, 2 validation, 3 nonconvergence, 4 contract.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace robin::cli

#pragma once
// The acceptance suite: ten numbered criteria, one PASS/FAIL line each.

#include <ostream>
#include <string>
#include <vector>

namespace robin::acceptance {

struct Outcome {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

// Runs the selected criteria (all when empty), printing each line as it finishes.
std::vector<Outcome> run(std::ostream& out, const std::vector<int>& only = {});

}  // namespace robin::acceptance

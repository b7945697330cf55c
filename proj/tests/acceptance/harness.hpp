#pragma once

// Minimal always-on harness for the acceptance suite: one pass/fail line per
// criterion check, never compiled out.

#include <functional>
#include <string>
#include <vector>

namespace acceptance {

struct Context {
    int threads = 1;
    bool failed = false;

    // Prints "[PASS] ..." or "[FAIL] ..." and records the outcome.
    void check(bool ok, const std::string& label);
    void check_close(double value, double target, double tol, const std::string& label);
    void check_less(double value, double bound, const std::string& label);
    void note(const std::string& text);
};

struct Criterion {
    int id;
    std::string title;
    std::function<void(Context&)> run;
};

std::vector<Criterion>& registry();

struct Register {
    Register(int id, std::string title, std::function<void(Context&)> fn);
};

// Deterministic trial fan-out used by the heavier criteria.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

}  // namespace acceptance

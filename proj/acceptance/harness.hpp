// Copyright 2026 the seqde authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SEQDE_ACCEPTANCE_HARNESS_HPP
#define SEQDE_ACCEPTANCE_HARNESS_HPP

#include <chrono>
#include <cstdio>
#include <string>

namespace acceptance {

class Harness {
public:
  // One line per criterion check; accumulated failures decide the exit code.
  void check(bool ok, const std::string& label, const std::string& detail) {
    std::printf("[%s] %s (%s)\n", ok ? "PASS" : "FAIL", label.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures_;
  }

  void note(const std::string& text) {
    std::printf("       %s\n", text.c_str());
    std::fflush(stdout);
  }

  int exit_code() const { return failures_ == 0 ? 0 : 1; }
  int failures() const { return failures_; }

private:
  int failures_ = 0;
};

class Timer {
public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

inline std::string format(const char* fmt, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), fmt, a);
  return buf;
}

inline std::string format(const char* fmt, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), fmt, a, b);
  return buf;
}

inline std::string format(const char* fmt, double a, double b, double c) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c);
  return buf;
}

} // namespace acceptance

#endif // SEQDE_ACCEPTANCE_HARNESS_HPP

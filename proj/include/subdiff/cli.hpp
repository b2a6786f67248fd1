#pragma once

#include <string>
#include <vector>

#include "subdiff/direct.hpp"
#include "subdiff/measure.hpp"

namespace subdiff {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kPrecisionEnvVar = "SUBDIFF_PRECISION_BITS";

// Exit codes: configuration problems, numeric failures (quadrature,
// truncation, factorization), and failed correctness checks are
// distinguished so scripts can react to each.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitCheck = 4;

// Spec-string constructors shared by the CLI and the python bindings:
//   frequency measure  "gaussian" or "<family>:<half_width>"
//   psf                "gaussian[:sigma]" | "supergauss:<d2>:<p>" |
//                      "lorentz:<d2>:<p>" | "sinc2"
MeasureSpec measure_from_spec(const std::string& spec);
PsfModel psf_from_spec(const std::string& spec);

// Full command-line entry point (argv without the program name). Writes the
// requested reports plus a run manifest into the output directory and
// returns the exit code. Never throws.
int run_cli(const std::vector<std::string>& args);

}  // namespace subdiff

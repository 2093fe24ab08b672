#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "wsp/problem.hpp"

namespace wsp {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Parses a problem config:
///
///     # comment
///     f = T*(x^2 + x^3/3)
///     g = 1/(1+x^2)
///     alpha = -1/2
///     beta = 1/2
///     T = 1024
///     n = 2
///     [params]
///     c = 0.25
///
/// Keys: f (required), g (default 1), alpha, beta (required), M (default
/// beta - alpha), N, U (default 1), T, n (default 2), grid (default 512).
/// Numeric values and params are constant expressions. M, N, T, U are also
/// bound as expression parameters. T is required when f or g mentions it;
/// otherwise it defaults to max |f''| M^2 over the grid (max |f'| M for a
/// linear phase).
PhaseProblem parse_config(std::string_view text);

PhaseProblem load_config(const std::string &path);

} // namespace wsp

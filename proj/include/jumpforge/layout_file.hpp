#pragma once

// Line-oriented description of an OpticalLayout.
//
//   # comment                       blank lines and '#' comments are ignored
//   qubits = 3                      required, before any per-qubit key
//   rate = 1.0                      default emission / pump rate (gamma)
//   rate[1] = 0.5                   per-qubit rate
//   mode[2] = se                    pbs (default) | se | is | se+is | off
//   theta[0] = 0.25                 PBS angle in radians (pbs mode only)
//   bs = x0 x1                      BS-combine two channels, removed after first click
//   bs_fixed = x0 x1                BS-combine without the removal rule
//   mix = y2                        classical-source mixing of a sigma_y port
//   trigger = watch:a,b deactivate:c activate:d,e [repeat]
//
// Channel ids follow the builders: x<q>, y<q> (pbs), se<q>, is<q>, and the
// BS / mix port ids bs<a>|<b>+-, mix<q>+-.

#include <istream>
#include <string>

#include "jumpforge/channels.hpp"

namespace jumpforge {

/// Throws ParseError carrying the offending line number.
OpticalLayout parse_layout(std::istream& in);
OpticalLayout parse_layout_string(const std::string& text);

}  // namespace jumpforge

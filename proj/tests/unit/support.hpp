#pragma once

#include "hdl/constants.hpp"

namespace hdl::test {

// Frozen constants; the calibration seed differs from every seed used here.
inline const Constants& constants() {
  static const Constants c = load_constants(HDL_TEST_CONSTANTS);
  return c;
}

}  // namespace hdl::test

#pragma once

#include <stdexcept>
#include <string>

namespace cv2x {

/// A broken engine invariant. Never a user error.
class InternalFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

#define CV2X_CHECK(cond, msg)                                                        \
  do {                                                                               \
    if (!(cond)) throw ::cv2x::InternalFault(std::string(__func__) + ": " + (msg)); \
  } while (false)

}  // namespace cv2x

#pragma once

namespace lzn {

inline constexpr char version_string[] = "0.1.0";

}

#pragma once

#include <string>
#include <string_view>

namespace geoloc {

/// Porter (1980) suffix stripping, following the behaviour of the reference C
/// implementation. Only tokens made entirely of ASCII lowercase letters are
/// stemmed; anything else (digits, tags, non-ASCII) is returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace geoloc

#include "ssw/harness.hpp"

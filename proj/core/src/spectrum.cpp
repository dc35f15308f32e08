#include "ssw/spectrum.hpp"

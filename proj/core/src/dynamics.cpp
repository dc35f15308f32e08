#include "ssw/dynamics.hpp"

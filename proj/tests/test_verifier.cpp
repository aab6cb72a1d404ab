#include "ogw/verifier.hpp"
#include <doctest.h>

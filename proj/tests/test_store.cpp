#include "ogw/store.hpp"
#include <doctest.h>

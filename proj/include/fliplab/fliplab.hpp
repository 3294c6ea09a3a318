#pragma once

#include "fliplab/arcs.hpp"
#include "fliplab/bfop.hpp"
#include "fliplab/extract.hpp"
#include "fliplab/flip.hpp"
#include "fliplab/hard.hpp"
#include "fliplab/instance.hpp"
#include "fliplab/io.hpp"
#include "fliplab/lab.hpp"
#include "fliplab/numeric.hpp"
#include "fliplab/rng.hpp"

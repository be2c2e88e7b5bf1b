#pragma once

#include <hwalks/canonical.hpp>
#include <hwalks/core.hpp>
#include <hwalks/error.hpp>
#include <hwalks/io.hpp>
#include <hwalks/kernel.hpp>
#include <hwalks/partition.hpp>
#include <hwalks/reach.hpp>
#include <hwalks/reduce.hpp>
#include <hwalks/search.hpp>

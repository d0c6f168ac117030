#pragma once

#include "hardycert/atomic.hpp"
#include "hardycert/criteria.hpp"
#include "hardycert/discretization.hpp"
#include "hardycert/errors.hpp"
#include "hardycert/extended.hpp"
#include "hardycert/instance.hpp"
#include "hardycert/oracle.hpp"
#include "hardycert/quadrature.hpp"
#include "hardycert/tail_sup.hpp"
#include "hardycert/weightfn.hpp"

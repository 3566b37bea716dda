#ifndef GL2RES_GL2RES_HPP
#define GL2RES_GL2RES_HPP

#include "gl2res/brauer.hpp"
#include "gl2res/cache.hpp"
#include "gl2res/character.hpp"
#include "gl2res/common.hpp"
#include "gl2res/ffield.hpp"
#include "gl2res/grp.hpp"
#include "gl2res/linalg.hpp"
#include "gl2res/mackey.hpp"
#include "gl2res/projline.hpp"
#include "gl2res/report.hpp"
#include "gl2res/reps.hpp"
#include "gl2res/serialize.hpp"
#include "gl2res/theorems.hpp"
#include "gl2res/verify.hpp"

#endif // GL2RES_GL2RES_HPP

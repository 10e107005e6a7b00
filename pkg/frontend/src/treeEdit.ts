/**
 * Pure abstraction-tree editing operations.
 *
 * Trees are plain JSON objects matching the server format; every edit
 * returns a new tree and throws on rule violations (duplicate names,
 * moving a node under its own subtree, deleting the root).  The server
 * re-validates on upload; these checks exist to surface errors inline.
 */

export interface TreeJson {
  name: string;
  children?: TreeJson[];
}

const NAME_RE = /^[A-Za-z_][A-Za-z0-9_]*$/;

export function isLeaf(node: TreeJson): boolean {
  return !node.children || node.children.length === 0;
}

export function listNames(tree: TreeJson): string[] {
  const out: string[] = [];
  const walk = (n: TreeJson) => {
    out.push(n.name);
    (n.children ?? []).forEach(walk);
  };
  walk(tree);
  return out;
}

export function listLeaves(tree: TreeJson): string[] {
  const out: string[] = [];
  const walk = (n: TreeJson) => {
    if (isLeaf(n)) out.push(n.name);
    else n.children!.forEach(walk);
  };
  walk(tree);
  return out;
}

export function findNode(tree: TreeJson, name: string): TreeJson | null {
  if (tree.name === name) return tree;
  for (const child of tree.children ?? []) {
    const hit = findNode(child, name);
    if (hit) return hit;
  }
  return null;
}

function clone(tree: TreeJson): TreeJson {
  return JSON.parse(JSON.stringify(tree));
}

function assertNewName(tree: TreeJson, name: string): void {
  if (!NAME_RE.test(name)) throw new Error(`invalid node name '${name}'`);
  if (findNode(tree, name)) throw new Error(`duplicate node name '${name}'`);
}

export function addChild(tree: TreeJson, parentName: string, newName: string): TreeJson {
  assertNewName(tree, newName);
  const next = clone(tree);
  const parent = findNode(next, parentName);
  if (!parent) throw new Error(`no node named '${parentName}'`);
  parent.children = [...(parent.children ?? []), { name: newName }];
  return next;
}

export function renameNode(tree: TreeJson, oldName: string, newName: string): TreeJson {
  if (oldName === newName) return clone(tree);
  assertNewName(tree, newName);
  const next = clone(tree);
  const node = findNode(next, oldName);
  if (!node) throw new Error(`no node named '${oldName}'`);
  node.name = newName;
  return next;
}

/**
 * Remove a node; its children re-attach to the grandparent in place.
 * The root cannot be deleted.
 */
export function deleteNode(tree: TreeJson, name: string): TreeJson {
  if (tree.name === name) throw new Error("cannot delete the root node");
  const next = clone(tree);
  const removeIn = (parent: TreeJson): boolean => {
    const children = parent.children ?? [];
    const idx = children.findIndex((c) => c.name === name);
    if (idx >= 0) {
      children.splice(idx, 1, ...(children[idx].children ?? []));
      parent.children = children;
      return true;
    }
    return children.some(removeIn);
  };
  if (!removeIn(next)) throw new Error(`no node named '${name}'`);
  return next;
}

/** Detach a subtree and append it under a new parent. */
export function moveNode(tree: TreeJson, name: string, newParentName: string): TreeJson {
  if (tree.name === name) throw new Error("cannot move the root node");
  const source = findNode(tree, name);
  if (!source) throw new Error(`no node named '${name}'`);
  if (findNode(source, newParentName)) {
    throw new Error(`cannot move '${name}' under its own descendant '${newParentName}'`);
  }
  if (name === newParentName) throw new Error("cannot move a node under itself");
  const next = clone(tree);
  let detached: TreeJson | null = null;
  const detachIn = (parent: TreeJson): boolean => {
    const children = parent.children ?? [];
    const idx = children.findIndex((c) => c.name === name);
    if (idx >= 0) {
      detached = children.splice(idx, 1)[0];
      parent.children = children;
      return true;
    }
    return children.some(detachIn);
  };
  detachIn(next);
  const target = findNode(next, newParentName);
  if (!target) throw new Error(`no node named '${newParentName}'`);
  target.children = [...(target.children ?? []), detached!];
  return next;
}

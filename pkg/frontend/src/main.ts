import { Workbench } from './app.js';

const root = document.getElementById('app');
if (root) {
  const workbench = new Workbench(root);
  void workbench.init();
}
